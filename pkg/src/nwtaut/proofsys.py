"""Proof systems built over the Frege kernel.

Three layers:

* the P+alpha systems: a proof of tau is a kernel proof of a right-nested
  disjunction ~a'_1 | (... | (~a'_t | tau)) where every a'_i is a
  substitution instance of the axiom alpha obtained by substituting only
  constants and variables for variables (zero disjuncts = a plain kernel
  proof);

* advice systems Q: a two-clause checker — nonempty advice w of length at
  most k^c is fed with (x, y) to an explicit checking circuit, while empty
  advice falls back to "y is a serialized kernel proof of the formula coded
  by x";

* the soundness-statement builders SAT_k / Prov_k / alpha_k and the
  simulation pipeline turning an accepted Q-proof into a P+alpha_k proof
  (D2 on the provability sentence, modus ponens with an alpha_k instance,
  then the D4 extraction of the proved formula).

Variable numbering conventions are carried in explicit encoding records;
nothing is implicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import circuits as cc
from . import formulas as fm
from .formulas import Formula
from .frege import (
    FREGE,
    FregeSystem,
    Proof,
    ProofBuilder,
    ProofError,
    check,
    discharge,
    mp,
    parse_proof,
    proof_size_bits,
    prove_tautology,
    prove_true_sentence,
    subst_proof,
)

__all__ = [
    "PlusAlphaSystem", "AdviceSystem", "SatEncoding", "ProvEncoding",
    "AlphaEncoding", "SimulateResult", "check", "subst_proof",
    "prove_true_sentence", "mp", "sat_formula", "d4_from_sat",
    "check_plus_alpha", "check_advice", "prov_formula", "alpha_k", "simulate",
]


@dataclass(frozen=True)
class PlusAlphaSystem:
    base: FregeSystem
    alpha: Formula


@dataclass(frozen=True)
class AdviceSystem:
    """Checker circuit over groups x (k bits), y, t plus an advice schedule
    w_k indexed by input length; checker=None gives the pure empty-advice
    system.  The y/t widths are whatever the checker declares (bounded by
    k^c, not forced to equal it)."""

    checker: cc.Circuit | None
    schedule: dict[int, str] = field(default_factory=dict)
    c: int = 2

    def widths(self) -> tuple[int, int, int]:
        if self.checker is None:
            raise ProofError("advice system has no explicit checker circuit")
        g = dict(self.checker.groups)
        if set(g) != {"x", "y", "t"}:
            raise ProofError(f"checker must have groups x, y, t; got {sorted(g)}")
        return g["x"], g["y"], g["t"]


# ---------------------------------------------------------------------------
# SAT_k

@dataclass(frozen=True)
class SatEncoding:
    """SAT_k(u, x, v) = CORRECT_E(u, x, v) -> out, with recorded numbering."""

    k: int
    formula: Formula
    correct: Formula
    conjuncts: tuple[Formula, ...]
    out_formula: Formula
    u_vars: tuple[int, ...]
    x_vars: tuple[int, ...]
    v_vars: tuple[int, ...]
    evaluator: cc.Circuit


def _single_output_formula(cf: cc.CircuitFormula) -> Formula:
    return ("var", cf.out_vars[0])


def sat_formula(
    k: int,
    evaluator: cc.Circuit,
    u_vars: list[int] | None = None,
    x_vars: list[int] | None = None,
    v_vars: list[int] | None = None,
) -> SatEncoding:
    """Tseitin-style satisfaction formula from the universal evaluator.

    Default numbering: u = 1..k, x = k+1..2k, v = 2k+1 onward."""
    groups = dict(evaluator.groups)
    if set(groups) != {"u", "x"} or groups["u"] != k or groups["x"] != k:
        raise ProofError(f"evaluator must have groups u, x of width {k}")
    if len(evaluator.outputs) != 1:
        raise ProofError("evaluator must have a single output")
    if u_vars is None:
        u_vars = list(range(1, k + 1))
    if x_vars is None:
        x_vars = list(range(k + 1, 2 * k + 1))
    if v_vars is None:
        v_vars = list(range(2 * k + 1, 2 * k + 1 + len(evaluator.gates)))
    # input order in the circuit is u then x
    cf = cc.circuit_to_formula(evaluator, list(u_vars) + list(x_vars), list(v_vars))
    out = _single_output_formula(cf)
    formula = fm.Implies(cf.correct, out)
    return SatEncoding(
        k, formula, cf.correct, cf.conjuncts, out,
        tuple(u_vars), tuple(x_vars), tuple(v_vars), evaluator,
    )


def _const_map(vars_: tuple[int, ...], bits: str) -> dict[int, Formula]:
    if len(vars_) != len(bits):
        raise ProofError(f"expected {len(vars_)} bits, got {len(bits)}")
    return {v: ("const", int(b)) for v, b in zip(vars_, bits)}


def _u_independent(circ: cc.Circuit, u_width: int) -> bool:
    """True if no gate reads a u-wire (wires 0..u_width-1)."""
    for g in circ.gates:
        args = g[2] if g[0] == "opaque" else g[1:]
        if any(a < u_width for a in args):
            return False
    return True


def evaluator_run_bits(enc: SatEncoding, code: str) -> str:
    """Gate values of the evaluator on formula code ``code``; defined only
    when the computation does not depend on u (true whenever no variable
    formula fits in k code bits)."""
    if not _u_independent(enc.evaluator, enc.k):
        raise ProofError(
            "evaluator computation depends on the assignment bits u; "
            "no constant run exists at this width"
        )
    vals = cc.wire_values(enc.evaluator, {"u": "0" * enc.k, "x": code})
    return "".join(str(b) for b in vals[2 * enc.k:])


# ---------------------------------------------------------------------------
# D4

def _prove_conjunction(b: ProofBuilder, conj_indices: list[int],
                       conjs: list[Formula]) -> int:
    """Fold proved conjuncts into the right-nested conjunction."""
    acc_idx = conj_indices[-1]
    acc_f = conjs[-1]
    for i in range(len(conjs) - 2, -1, -1):
        step = b.axiom("C3", {1: conjs[i], 2: acc_f})
        half = b.mp(conj_indices[i], step)
        acc_idx = b.mp(acc_idx, half)
        acc_f = ("and", conjs[i], acc_f)
    return acc_idx


def _prove_equiv_refl(b: ProofBuilder, conjunct: Formula) -> int:
    """Prove a conjunct of the shape equiv(theta, theta)."""
    if (
        conjunct[0] != "and"
        or conjunct[1] != conjunct[2]
        or conjunct[1][0] != "or"
        or conjunct[1][1][0] != "not"
        or conjunct[1][1][1] != conjunct[1][2]
    ):
        raise ProofError(
            "gate equivalence did not reduce to a reflexive instance; "
            "substitution map disagrees with the gate structure"
        )
    theta = conjunct[1][2]
    leg_f = ("or", ("not", theta), theta)
    i = b.axiom("ID", {1: theta})
    step = b.axiom("C3", {1: leg_f, 2: leg_f})
    half = b.mp(i, step)
    return b.mp(i, half)


def d4_from_sat(
    P: FregeSystem,
    pi_sat: Proof,
    phi: Formula,
    enc: SatEncoding,
    code: str,
) -> Proof:
    """D4: from a proof of the satisfaction statement at x = code(phi),
    derive phi itself.

    Two shapes are handled.  With the computation variables v free, each v_g
    is substituted by the exact formula computed at gate g (code bits
    constant-folded), which turns every gate equivalence into a reflexive
    instance with a short schematic proof.  With v already filled by the
    constant run bits, the substituted CORRECT part is a true sentence and
    D2 applies.  In both cases a final case-analysis lemma bridges the
    out-gate formula to phi.  Hypothesis lines in the input are preserved
    (the simulation pipeline discharges them afterwards)."""
    xmap = _const_map(enc.x_vars, code)
    conclusion = pi_sat.conclusion
    free_shape = fm.substitute(enc.formula, xmap)

    b = ProofBuilder(P)
    if conclusion == free_shape:
        if pi_sat.hypotheses():
            raise ProofError(
                "free-v extraction substitutes into every line and would "
                "corrupt hypothesis lines; discharge them first"
            )
        # sigma_v: gate variable -> formula computed at that gate
        wf: dict[int, Formula] = {}
        for j in range(enc.k):
            wf[j] = ("var", enc.u_vars[j])
        for j in range(enc.k):
            wf[enc.k + j] = ("const", int(code[j]))
        gate_f = cc.gate_formulas(enc.evaluator, wf)
        sigma = {enc.v_vars[i]: gate_f[2 * enc.k + i] for i in range(len(enc.v_vars))}
        pi2 = subst_proof(pi_sat, sigma, P)
        imp_idx = b.append_proof(pi2)
        conjs = [fm.substitute(cj, {**xmap, **sigma}) for cj in enc.conjuncts]
        idxs = [_prove_equiv_refl(b, cj) for cj in conjs]
        corr_idx = _prove_conjunction(b, idxs, conjs)
        phi_prime_idx = b.mp(corr_idx, imp_idx)
        phi_prime = fm.substitute(enc.out_formula, sigma)
    else:
        run = evaluator_run_bits(enc, code)
        vmap = _const_map(enc.v_vars, run)
        sub = {**xmap, **vmap}
        if conclusion != fm.substitute(enc.formula, sub):
            raise ProofError("proof conclusion is not the satisfaction statement")
        correct_sentence = fm.substitute(enc.correct, sub)
        imp_idx = b.append_proof(pi_sat)
        corr_idx = b.append_proof(prove_true_sentence(correct_sentence, P))
        phi_prime_idx = b.mp(corr_idx, imp_idx)
        phi_prime = fm.substitute(enc.out_formula, sub)
    if phi_prime == phi:
        return b.proof(phi_prime_idx)
    bridge = prove_tautology(fm.Implies(phi_prime, phi), P)
    bridge_idx = b.append_proof(bridge)
    final = b.mp(phi_prime_idx, bridge_idx)
    return b.proof(final)


# ---------------------------------------------------------------------------
# P + alpha

def check_plus_alpha(S: PlusAlphaSystem, tau: Formula, pi: Proof) -> bool:
    """Def-shape acceptance: a kernel proof of a right-nested disjunction of
    negated alpha-instances ending in tau (possibly with no instances)."""
    lines = pi.lines
    if not lines:
        return False
    for i in range(len(lines)):
        if not S.base.line_valid(lines, i):
            return False

    def peel(C: Formula) -> bool:
        if C == tau:
            return True
        if C[0] == "or" and C[1][0] == "not":
            if fm.match_instance(C[1][1], S.alpha) is not None:
                return peel(C[2])
        return False

    return peel(lines[-1].formula)


# ---------------------------------------------------------------------------
# advice systems

def check_advice(QS: AdviceSystem, x: str, y: str, w: str) -> bool:
    """The two-clause advice checker: nonempty w runs the explicit circuit,
    empty w asks whether y serializes a kernel proof of the formula coded
    by x.  False, never an exception, on malformed inputs."""
    k = len(x)
    if not x or any(ch not in "01" for ch in x):
        return False
    if w:
        if QS.checker is None:
            return False
        try:
            xw, yw, tw = QS.widths()
        except ProofError:
            return False
        if k != xw or len(y) != yw or len(w) != tw:
            return False
        if any(ch not in "01" for ch in y + w) or len(w) > k**QS.c:
            return False
        return cc.eval_circuit(QS.checker, {"x": x, "y": y, "t": w}) == "1"
    if 8 * len(y.encode()) > k**QS.c:
        return False
    phi = fm.decode_k(x)
    if phi is None:
        return False
    try:
        proof = parse_proof(y)
    except (ProofError, fm.ParseError):
        return False
    return check(FREGE, phi, proof)


@dataclass(frozen=True)
class ProvEncoding:
    """Prov_k(x, y, t, s) = CORRECT_Q(x, y, t, s) & out; satisfiable in s
    exactly on accepted (x, y, t)."""

    k: int
    c: int
    formula: Formula
    correct: Formula
    conjuncts: tuple[Formula, ...]
    out_formula: Formula
    x_vars: tuple[int, ...]
    y_vars: tuple[int, ...]
    t_vars: tuple[int, ...]
    s_vars: tuple[int, ...]
    checker: cc.Circuit


def prov_formula(QS: AdviceSystem, k: int, c: int | None = None) -> ProvEncoding:
    """Numbering: x = 1..k, then y, t, s consecutively."""
    if c is None:
        c = QS.c
    xw, yw, tw = QS.widths()
    if xw != k:
        raise ProofError(f"checker takes {xw}-bit codes, not {k}")
    if yw > k**c or tw > k**c:
        raise ProofError(f"checker widths y={yw}, t={tw} exceed k^c = {k**c}")
    if len(QS.checker.outputs) != 1:
        raise ProofError("checker must have a single output")
    x_vars = list(range(1, k + 1))
    y_vars = list(range(k + 1, k + 1 + yw))
    t_vars = list(range(k + 1 + yw, k + 1 + yw + tw))
    s_base = k + 1 + yw + tw
    s_vars = list(range(s_base, s_base + len(QS.checker.gates)))
    cf = cc.circuit_to_formula(QS.checker, x_vars + y_vars + t_vars, s_vars)
    out = _single_output_formula(cf)
    formula = fm.And(cf.correct, out)
    return ProvEncoding(
        k, c, formula, cf.correct, cf.conjuncts, out,
        tuple(x_vars), tuple(y_vars), tuple(t_vars), tuple(s_vars), QS.checker,
    )


@dataclass(frozen=True)
class AlphaEncoding:
    """alpha_k = Prov_k(x, y, w_k, s) -> SAT_k(z, x, v), with the advice
    baked in as constants and the satisfaction side renumbered so that its
    code slot is the shared x and its assignment slot is fresh z."""

    k: int
    c: int
    alpha: Formula
    antecedent: Formula
    consequent: Formula
    w_k: str
    x_vars: tuple[int, ...]
    y_vars: tuple[int, ...]
    s_vars: tuple[int, ...]
    z_vars: tuple[int, ...]
    v_vars: tuple[int, ...]
    prov: ProvEncoding
    sat: SatEncoding


def alpha_k(
    QS: AdviceSystem,
    w_k: str,
    k: int,
    c: int | None = None,
    evaluator: cc.Circuit | None = None,
) -> AlphaEncoding:
    if c is None:
        c = QS.c
    prov = prov_formula(QS, k, c)
    if len(w_k) != len(prov.t_vars):
        raise ProofError(
            f"advice has {len(w_k)} bits, checker expects {len(prov.t_vars)}"
        )
    if evaluator is None:
        evaluator = cc.universal_evaluator(k, trim=True)
    # global numbering: x, y, s (advice t substituted away), then z, v
    n_y, n_s = len(prov.y_vars), len(prov.s_vars)
    s_start = k + n_y + 1
    z_start = s_start + n_s
    v_start = z_start + k
    x_vars = tuple(range(1, k + 1))
    y_vars = tuple(range(k + 1, k + 1 + n_y))
    s_vars = tuple(range(s_start, s_start + n_s))
    z_vars = tuple(range(z_start, z_start + k))
    n_v = len(evaluator.gates)
    v_vars = tuple(range(v_start, v_start + n_v))

    prov_sub: dict[int, Formula] = _const_map(prov.t_vars, w_k)
    prov_sub.update({old: ("var", new) for old, new in zip(prov.s_vars, s_vars)})
    antecedent = fm.substitute(prov.formula, prov_sub)

    sat = sat_formula(k, evaluator, list(z_vars), list(x_vars), list(v_vars))
    alpha = fm.Implies(antecedent, sat.formula)
    return AlphaEncoding(
        k, c, alpha, antecedent, sat.formula, w_k,
        x_vars, y_vars, s_vars, z_vars, v_vars, prov, sat,
    )


# ---------------------------------------------------------------------------
# the simulation pipeline

@dataclass(frozen=True)
class SimulateResult:
    proof: Proof
    tau: Formula
    alpha: AlphaEncoding | None
    stage_bits: dict[str, int]

    @property
    def size_bits(self) -> int:
        return proof_size_bits(self.proof)


def checker_run_bits(QS: AdviceSystem, x: str, y: str, w: str) -> str:
    vals = cc.wire_values(QS.checker, {"x": x, "y": y, "t": w})
    return "".join(str(b) for b in vals[QS.checker.n_inputs:])


def simulate(
    QS: AdviceSystem,
    w_k: str,
    phi: Formula,
    pi_Q: str,
    P: FregeSystem = FREGE,
    evaluator: cc.Circuit | None = None,
) -> SimulateResult:
    """Turn an accepted Q-proof of phi into a P+alpha_k proof of phi.

    Empty advice short-circuits: the Q-proof is itself a kernel proof of phi
    and is returned as a zero-disjunct P+alpha proof.  With nonempty advice
    the pipeline runs D2 on the (true) provability sentence, modus ponens
    against the alpha_k instance at x = code(phi), y = pi_Q, s = the checker
    run, v = the evaluator run, and finishes with the D4 extraction; the
    hypothesis instance is then discharged into the single negated disjunct.
    """
    if w_k == "":
        code = None
        for k in range(8, 4097):
            code = fm.encode_k(phi, k)
            if code is not None:
                break
        if code is None or not check_advice(QS, code, pi_Q, ""):
            raise ProofError("advice checker rejects the given Q-proof")
        proof = parse_proof(pi_Q)
        return SimulateResult(
            proof, phi, None, {"total": proof_size_bits(proof)}
        )

    k, _, _ = QS.widths()
    code = fm.encode_k(phi, k)
    if code is None:
        raise ProofError(f"formula does not fit a {k}-bit code")
    if not check_advice(QS, code, pi_Q, w_k):
        raise ProofError("advice checker rejects the given Q-proof")
    alpha = alpha_k(QS, w_k, k, QS.c, evaluator)

    # D2 stage: the provability sentence at the accepting run is true
    e = checker_run_bits(QS, code, pi_Q, w_k)
    inst: dict[int, Formula] = {}
    inst.update(_const_map(alpha.x_vars, code))
    inst.update(_const_map(alpha.y_vars, pi_Q))
    inst.update(_const_map(alpha.s_vars, e))
    prov_sentence = fm.substitute(alpha.antecedent, inst)
    if fm.evaluate(prov_sentence, {}) != 1:
        raise ProofError("provability sentence is false (tampered proof?)")
    pi_prov = prove_true_sentence(prov_sentence, P)

    # the alpha_k instance: z stays variable, v gets the constant run
    run = evaluator_run_bits(alpha.sat, code)
    inst.update(_const_map(alpha.v_vars, run))
    alpha_inst = fm.substitute(alpha.alpha, inst)

    b = ProofBuilder(P)
    hyp_idx = b.hyp(alpha_inst)
    prov_idx = b.append_proof(pi_prov)
    sat_idx = b.mp(prov_idx, hyp_idx)
    pi_sat = b.proof(sat_idx)

    pi_phi = d4_from_sat(P, pi_sat, phi, alpha.sat, code)
    final = discharge(pi_phi, alpha_inst, P)

    S = PlusAlphaSystem(P, alpha.alpha)
    if not check_plus_alpha(S, phi, final):
        raise ProofError("internal error: pipeline output fails check_plus_alpha")
    return SimulateResult(
        final, phi, alpha,
        {
            "prov_d2": proof_size_bits(pi_prov),
            "sat_mp": proof_size_bits(pi_sat),
            "d4": proof_size_bits(pi_phi),
            "total": proof_size_bits(final),
        },
    )
