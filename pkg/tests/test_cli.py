import os

import pytest

from nwtaut import circuits as cc
from nwtaut import designs as dg
from nwtaut import formulas as fm
from nwtaut import frege as fr
from nwtaut.cli import EXIT_ERROR, EXIT_NONE, EXIT_SOLUTION, EXIT_UNKNOWN, main


def run(*argv):
    return main(list(argv))


def tiny_checker_text(k=8):
    b = cc.CircuitBuilder([("x", k), ("y", 1), ("t", 1)])
    out = b.AND(b.inp("x", 4), b.AND(b.inp("y", 1), b.inp("t", 1)))
    return cc.serialize(b.build([out]))


def em_proof_text():
    b = fr.ProofBuilder()
    b.axiom("EM", {1: fm.Var(1)})
    return fr.serialize_proof(b.proof())


# ---------------------------------------------------------------------------
# design

def test_design_poly_writes_file_and_manifest(tmp_path, capsys):
    out = str(tmp_path / "d.design")
    assert run("design", "--poly", "--q", "3", "--d", "2", "--out", out) == EXIT_SOLUTION
    params = dg.parse_design(open(out).read())
    assert (params.n, params.m) == (9, 9)
    manifest = open(out + ".manifest").read()
    assert manifest.startswith("manifest\ncommand design\n")
    assert "output d.design" in manifest
    assert run("design", "--verify", out) == EXIT_SOLUTION
    assert "ok" in capsys.readouterr().out


def test_design_requires_a_mode(capsys):
    assert run("design") == EXIT_ERROR


def test_design_bad_params():
    assert run("design", "--poly", "--q", "6") == EXIT_ERROR


# ---------------------------------------------------------------------------
# gen-tau

def test_gen_tau_explicit_b(tmp_path, capsys):
    outdir = str(tmp_path / "taus")
    rc = run(
        "gen-tau", "--q", "3", "--d", "2", "--base", "parity",
        "--b", "111111111,000000000", "--verdict", "--outdir", outdir,
    )
    assert rc == EXIT_SOLUTION
    files = sorted(os.listdir(outdir))
    assert "tau_111111111.cnf" in files and "gen-tau.manifest" in files
    out = capsys.readouterr().out
    assert "b=000000000" in out and "tautologies" in out
    # the all-zero string is in the range (zero seed), so it is falsifiable
    assert "b=000000000: falsifiable (SAT)" in out


def test_gen_tau_needs_b_or_sweep(tmp_path):
    assert run("gen-tau", "--outdir", str(tmp_path)) == EXIT_ERROR


# ---------------------------------------------------------------------------
# check-proof

def test_check_proof_accepts_and_rejects(tmp_path):
    path = str(tmp_path / "em.proof")
    with open(path, "w") as fh:
        fh.write(em_proof_text())
    assert run("check-proof", "--tau", "x1 | ~x1", "--proof", path) == EXIT_SOLUTION
    assert run("check-proof", "--tau", "x1 | x2", "--proof", path) == EXIT_ERROR
    assert run(
        "check-proof", "--tau", "x1 | ~x1", "--proof", path, "--alpha", "1"
    ) == EXIT_SOLUTION


def test_check_proof_missing_file(tmp_path):
    assert run("check-proof", "--tau", "1", "--proof", str(tmp_path / "no")) == EXIT_ERROR


# ---------------------------------------------------------------------------
# simulate

def test_simulate_checker_pipeline(tmp_path, capsys):
    checker = str(tmp_path / "q.circ")
    with open(checker, "w") as fh:
        fh.write(tiny_checker_text())
    out = str(tmp_path / "phi.proof")
    rc = run(
        "simulate", "--phi", "1", "--checker", checker,
        "--w", "1", "--y", "1", "--out", out,
    )
    assert rc == EXIT_SOLUTION
    stdout = capsys.readouterr().out
    assert "stage total" in stdout and "P+alpha proof written" in stdout
    proof = fr.parse_proof(open(out).read())
    assert len(proof) > 0
    assert os.path.exists(out + ".manifest")


def test_simulate_empty_advice(tmp_path):
    kernel = str(tmp_path / "em.proof")
    with open(kernel, "w") as fh:
        fh.write(em_proof_text())
    out = str(tmp_path / "out.proof")
    rc = run(
        "simulate", "--phi", "x1 | ~x1", "--empty-advice",
        "--proof", kernel, "--out", out,
    )
    assert rc == EXIT_SOLUTION
    assert fr.parse_proof(open(out).read()).conclusion == fm.parse("x1 | ~x1")


def test_simulate_rejected_proof(tmp_path):
    checker = str(tmp_path / "q.circ")
    with open(checker, "w") as fh:
        fh.write(tiny_checker_text())
    rc = run(
        "simulate", "--phi", "1", "--checker", checker,
        "--w", "1", "--y", "0", "--out", str(tmp_path / "x"),
    )
    assert rc == EXIT_ERROR


# ---------------------------------------------------------------------------
# solve

def reject_all_circuit_text(k=8):
    b = cc.CircuitBuilder([("x", k), ("y", 1)])
    out = b.AND(b.inp("y", 1), b.NOT(b.inp("y", 1)))
    return cc.serialize(b.build([out]))


def test_solve_cert_solution_and_exit_code(tmp_path, capsys):
    circ = str(tmp_path / "d.circ")
    with open(circ, "w") as fh:
        fh.write(reject_all_circuit_text())
    out = str(tmp_path / "sol.txt")
    rc = run("solve", "--task", "cert", "--circuit", circ, "--out", out)
    assert rc == EXIT_SOLUTION
    text = open(out).read()
    assert "kind tautology-rejected" in text and "code 11110000" in text
    assert os.path.exists(out + ".manifest")


def test_solve_cert_budget_exit_code(tmp_path):
    circ = str(tmp_path / "d.circ")
    with open(circ, "w") as fh:
        fh.write(reject_all_circuit_text(16))
    rc = run("solve", "--task", "cert", "--k", "16", "--circuit", circ)
    assert rc == EXIT_UNKNOWN


def write_four_block_design(tmp_path):
    params = dg.explicit_design([[1, 2], [2, 3], [1, 3], [1, 4]], 4, 2)
    path = str(tmp_path / "fb.design")
    with open(path, "w") as fh:
        fh.write(dg.serialize_design(params))
    return path


def test_solve_err_true_seed_none(tmp_path, capsys):
    design = write_four_block_design(tmp_path)
    rc = run(
        "solve", "--task", "err", "--design", design,
        "--seed", "1010", "--w", "1010",
    )
    assert rc == EXIT_NONE
    assert "verdict none" in capsys.readouterr().out


def test_solve_err_and_pair_agree_on_wrong_advice(tmp_path, capsys):
    design = write_four_block_design(tmp_path)
    rc = run(
        "solve", "--task", "err", "--design", design,
        "--seed", "1010", "--w", "1101",
    )
    assert rc == EXIT_SOLUTION
    err_out = capsys.readouterr().out
    rc = run(
        "solve", "--task", "pair", "--design", design,
        "--seed", "1010", "--w", "1101",
    )
    assert rc == EXIT_SOLUTION
    pair_out = capsys.readouterr().out
    get = lambda s: next(l.split()[1] for l in s.splitlines() if l.startswith("index"))
    assert get(err_out) == get(pair_out)


def test_solve_find_verify(capsys):
    rc = run(
        "solve", "--task", "find-verify", "--alpha", "x1 | ~x1",
        "--beta", "1", "--mode", "sound",
    )
    assert rc == EXIT_SOLUTION
    rc = run(
        "solve", "--task", "find-verify", "--alpha", "x1 | ~x1",
        "--beta", "0", "--mode", "sound",
    )
    assert rc == EXIT_NONE


# ---------------------------------------------------------------------------
# reduce

def test_reduce_writes_envelope(tmp_path, capsys):
    out = str(tmp_path / "cert.envelope")
    rc = run("reduce", "--alpha", "x1 | ~x1", "--out", out)
    assert rc == EXIT_SOLUTION
    from nwtaut.tasks import parse_envelope, sha256_hex

    env = parse_envelope(open(out).read())
    assert env.task == "cert"
    assert env.params["y-width"] == "8"
    assert env.files[0][2] == sha256_hex("x1 | ~x1")


# ---------------------------------------------------------------------------
# manifest reproducibility

def test_manifest_output_hashes_reproduce(tmp_path):
    argv = ["design", "--poly", "--q", "5", "--d", "3"]
    out1, out2 = str(tmp_path / "a.design"), str(tmp_path / "b.design")
    assert run(*argv, "--out", out1) == EXIT_SOLUTION
    assert run(*argv, "--out", out2) == EXIT_SOLUTION

    def hashes(path):
        return [
            line.split()[2]
            for line in open(path + ".manifest")
            if line.startswith(("input ", "output "))
        ]

    assert hashes(out1) == hashes(out2)
    assert open(out1).read() == open(out2).read()


def test_manifest_records_argv_and_params(tmp_path):
    out = str(tmp_path / "c.design")
    run("design", "--poly", "--q", "3", "--d", "2", "--out", out)
    lines = open(out + ".manifest").read().splitlines()
    assert any(l.startswith("argv design --poly") for l in lines)
    assert "param tag poly" in lines
    assert any(l.startswith("wallclock ") for l in lines)
