import pytest
from hypothesis import given, settings, strategies as st

from nwtaut import formulas as fm
from nwtaut import frege as fr


def sentences(max_leaves=10):
    leaf = st.sampled_from([("const", 0), ("const", 1)])
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            sub.map(fm.Not),
            st.tuples(sub, sub).map(lambda p: fm.And(*p)),
            st.tuples(sub, sub).map(lambda p: fm.Or(*p)),
        ),
        max_leaves=max_leaves,
    )


def small_formulas(max_var=3, max_leaves=8):
    leaf = st.one_of(
        st.integers(1, max_var).map(fm.Var),
        st.sampled_from([("const", 0), ("const", 1)]),
    )
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            sub.map(fm.Not),
            st.tuples(sub, sub).map(lambda p: fm.And(*p)),
            st.tuples(sub, sub).map(lambda p: fm.Or(*p)),
        ),
        max_leaves=max_leaves,
    )


# ---------------------------------------------------------------------------
# the kernel itself

def test_axiom_schemes_are_tautologies():
    for name, pattern in fr.AXIOM_SCHEMES.items():
        assert fm.is_tautology(pattern, "brute"), name


def test_check_accepts_a_hand_proof():
    # x1 -> x1 via P1 and P2
    p, q = fm.Var(1), fm.Var(1)
    b = fr.ProofBuilder()
    a1 = b.axiom("P1", {1: p, 2: fm.Implies(p, p)})
    a2 = b.axiom("P2", {1: p, 2: fm.Implies(p, p), 3: p})
    s = b.mp(a1, a2)
    a3 = b.axiom("P1", {1: p, 2: p})
    idx = b.mp(a3, s)
    proof = b.proof(idx)
    assert fr.check(fr.FREGE, fm.Implies(p, q), proof)


def test_check_rejects_tampered_lines():
    proof = fr.prove_true_sentence(fm.parse("1 | 0"))
    lines = list(proof.lines)
    # swap in a wrong formula on the last line
    lines[-1] = fr.Line(fm.parse("0"), lines[-1].just)
    assert not fr.check(fr.FREGE, fm.parse("0"), fr.Proof(tuple(lines)))


def test_check_rejects_hypotheses_and_forward_references():
    hyp = fr.Proof((fr.Line(fm.Var(1), ("hyp",)),))
    assert not fr.check(fr.FREGE, fm.Var(1), hyp)
    assert fr.check_derivation(fr.FREGE, hyp)
    bad = fr.Proof((fr.Line(fm.parse("1"), ("mp", 0, 1)),))
    assert not fr.check(fr.FREGE, fm.parse("1"), bad)


def test_check_rejects_unknown_scheme_and_bad_instance():
    bad = fr.Proof((fr.Line(fm.parse("1"), ("axiom", "Z9", {})),))
    assert not fr.check(fr.FREGE, fm.parse("1"), bad)
    wrong = fr.Proof((fr.Line(fm.parse("0"), ("axiom", "T1", {})),))
    assert not fr.check(fr.FREGE, fm.parse("0"), wrong)


def test_empty_proof_rejected():
    assert not fr.check(fr.FREGE, fm.parse("1"), fr.Proof(()))
    with pytest.raises(fr.ProofError):
        fr.Proof(()).conclusion


# ---------------------------------------------------------------------------
# D2: proofs of true sentences

@given(sentences())
@settings(max_examples=300)
def test_prove_true_sentence_matches_truth(psi):
    if fm.evaluate(psi, {}) == 1:
        proof = fr.prove_true_sentence(psi)
        assert fr.check(fr.FREGE, psi, proof)
    else:
        with pytest.raises(fr.ProofError):
            fr.prove_true_sentence(psi)


def test_prove_true_sentence_rejects_variables():
    with pytest.raises(fr.ProofError):
        fr.prove_true_sentence(fm.Var(1))


# ---------------------------------------------------------------------------
# D1: substitution closure

@given(sentences(max_leaves=6))
@settings(max_examples=100)
def test_subst_proof_stays_valid(psi):
    if fm.evaluate(psi, {}) != 1:
        return
    proof = fr.prove_true_sentence(psi)
    # substitution into a variable-free proof is trivial; exercise it on a
    # proof with variables instead
    tau = fm.Or(fm.Var(1), fm.Not(fm.Var(1)))
    pi = fr.prove_tautology(tau)
    sigma = {1: psi}
    out = fr.subst_proof(pi, sigma)
    assert fr.check(fr.FREGE, fm.substitute(tau, sigma), out)
    assert len(out) == len(pi)


def test_subst_proof_rejects_broken_input():
    bad = fr.Proof((fr.Line(fm.parse("0"), ("axiom", "T1", {})),))
    with pytest.raises(fr.ProofError):
        fr.subst_proof(bad, {})


# ---------------------------------------------------------------------------
# D3: modus ponens on proofs

def test_mp_combines_proofs():
    pi1 = fr.prove_true_sentence(fm.parse("1"))
    pi2 = fr.prove_true_sentence(fm.parse("~1 | ~0"))
    out = fr.mp(pi1, pi2)
    assert fr.check(fr.FREGE, fm.parse("~0"), out)


def test_mp_rejects_shape_mismatch():
    pi1 = fr.prove_true_sentence(fm.parse("1"))
    pi2 = fr.prove_true_sentence(fm.parse("~0 | 1"))
    with pytest.raises(fr.ProofError):
        fr.mp(pi1, pi2)


# ---------------------------------------------------------------------------
# deduction theorem and the complete prover

def test_discharge_removes_one_hypothesis():
    H = fm.Var(1)
    b = fr.ProofBuilder()
    h = b.hyp(H)
    idx = b.imply(h, "D1", {1: H, 2: fm.Var(2)})
    der = b.proof(idx)
    out = fr.discharge(der, H)
    assert out.hypotheses() == []
    assert out.conclusion == fm.Implies(H, fm.Or(H, fm.Var(2)))
    assert fr.check(fr.FREGE, out.conclusion, out)


def test_discharge_keeps_other_hypotheses():
    b = fr.ProofBuilder()
    h1 = b.hyp(fm.Var(1))
    idx = b.imply(h1, "N4", {1: fm.Var(1)})
    der = b.proof(idx)
    out = fr.discharge(der, fm.Var(2))  # not among the hypotheses
    assert out.hypotheses() == [fm.Var(1)]
    assert fr.check_derivation(fr.FREGE, out)


@pytest.mark.parametrize("text", [
    "x1 | ~x1",
    "~x1 | x1",
    "~(x1 & x2) | (x2 & x1 | x3)",
    "~(x1 | x2) | (x2 | x1)",
    "~(x1 & (x2 | x3)) | (x1 & x2 | x1 & x3)",
    "~~x1 | ~x1",
    "1 | x1",
    "~(x1 & ~x1)",
])
def test_prove_tautology_batch(text):
    tau = fm.parse(text)
    proof = fr.prove_tautology(tau)
    assert fr.check(fr.FREGE, tau, proof)


@given(small_formulas())
@settings(max_examples=60, deadline=None)
def test_prove_tautology_agrees_with_oracle(f):
    if fm.is_tautology(f, "brute"):
        assert fr.check(fr.FREGE, f, fr.prove_tautology(f))
    else:
        with pytest.raises(fr.ProofError):
            fr.prove_tautology(f)


def test_prove_tautology_var_limit():
    f = fm.big_or([fm.Var(i) for i in range(1, 10)] + [fm.Not(fm.Var(1))])
    with pytest.raises(fm.BudgetError):
        fr.prove_tautology(f)


# ---------------------------------------------------------------------------
# serialization

@pytest.mark.parametrize("make", [
    lambda: fr.prove_true_sentence(fm.parse("~(0 & 1) | 1")),
    lambda: fr.prove_tautology(fm.parse("x1 | ~x1")),
])
def test_proof_text_round_trip(make):
    proof = make()
    text = fr.serialize_proof(proof)
    back = fr.parse_proof(text)
    assert back == proof
    assert fr.proof_size_bits(proof) == 8 * len(text.encode())


def test_proof_text_round_trip_with_hyp():
    b = fr.ProofBuilder()
    h = b.hyp(fm.Var(3))
    idx = b.imply(h, "N4", {1: fm.Var(3)})
    proof = b.proof(idx)
    back = fr.parse_proof(fr.serialize_proof(proof))
    assert back == proof


@pytest.mark.parametrize("bad", [
    "",
    "1 x1 ; hyp\n",                      # missing header
    "proof\n2 x1 ; hyp\n",               # wrong numbering
    "proof\n1 x1 hyp\n",                 # missing separator
    "proof\n1 x1 ; frob\n",              # unknown justification
    "proof\n1 x1 ; axiom\n",             # scheme name missing
    "proof\n1 1 ; mp one two\n",         # non-numeric premises
])
def test_parse_proof_rejects_malformed(bad):
    with pytest.raises((fr.ProofError, fm.ParseError)):
        fr.parse_proof(bad)
