import pytest
from hypothesis import given, settings, strategies as st

from nwtaut import formulas as fm


def formulas(max_var=6, max_leaves=12):
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


def assignments(max_var=6):
    return st.fixed_dictionaries(
        {i: st.integers(0, 1) for i in range(1, max_var + 1)}
    )


# ---------------------------------------------------------------------------
# construction, text, evaluation

def test_constructors_shape():
    f = fm.Implies(fm.Var(1), fm.Or(fm.Var(2), fm.CONST0))
    assert f == ("or", ("not", ("var", 1)), ("or", ("var", 2), ("const", 0)))


def test_big_or_right_nested():
    f = fm.big_or([fm.Var(1), fm.Var(2), fm.Var(3)])
    assert f == ("or", ("var", 1), ("or", ("var", 2), ("var", 3)))


def test_parse_examples():
    assert fm.parse("x1 & ~x2 | 0") == (
        "or", ("and", ("var", 1), ("not", ("var", 2))), ("const", 0)
    )
    assert fm.parse("~(x1 | x2)") == ("not", ("or", ("var", 1), ("var", 2)))


def test_parse_rejects_garbage():
    for bad in ["", "x0", "x1 &", "(x1", "x1 x2", "y1"]:
        with pytest.raises(fm.ParseError):
            fm.parse(bad)


@given(formulas())
def test_text_round_trip(f):
    assert fm.parse(fm.to_text(f)) == f


@given(formulas(), assignments())
def test_evaluate_matches_python_semantics(f, a):
    def ref(g):
        t = g[0]
        if t == "const":
            return g[1]
        if t == "var":
            return a[g[1]]
        if t == "not":
            return 1 - ref(g[1])
        if t == "and":
            return ref(g[1]) & ref(g[2])
        return ref(g[1]) | ref(g[2])

    assert fm.evaluate(f, a) == ref(f)


def test_evaluate_missing_var():
    with pytest.raises(fm.EvalError):
        fm.evaluate(fm.Var(3), {1: 0})


# ---------------------------------------------------------------------------
# substitution and matching

@given(formulas(max_var=3), st.dictionaries(st.integers(1, 3), formulas(max_var=2), max_size=3))
def test_substitute_then_evaluate(f, sigma):
    a = {i: 1 for i in range(1, 4)}
    g = fm.substitute(f, sigma)
    expected = fm.evaluate(
        f, {i: (fm.evaluate(sigma[i], a) if i in sigma else a[i]) for i in range(1, 4)}
    )
    assert fm.evaluate(g, a) == expected


@given(formulas(max_var=3), st.dictionaries(
    st.integers(1, 3),
    st.one_of(st.integers(1, 5).map(fm.Var), st.sampled_from([fm.CONST0, fm.CONST1])),
    max_size=3,
))
def test_match_instance_round_trip(pattern, sigma):
    cand = fm.substitute(pattern, sigma)
    got = fm.match_instance(cand, pattern)
    assert got is not None
    assert fm.substitute(pattern, got) == cand


def test_match_instance_rejects_formula_targets():
    pattern = fm.And(fm.Var(1), fm.Var(1))
    cand = fm.And(fm.Or(fm.Var(1), fm.Var(2)), fm.Or(fm.Var(1), fm.Var(2)))
    assert fm.match_instance(cand, pattern) is None


def test_match_instance_consistency():
    pattern = fm.And(fm.Var(1), fm.Var(1))
    assert fm.match_instance(fm.And(fm.Var(2), fm.Var(3)), pattern) is None


# ---------------------------------------------------------------------------
# canonical code

def test_encode_pinned_bytes():
    # the two formulas that fit 8 bits, spelled out token by token
    assert fm.encode_k(("const", 1), 8) == "11110000"
    assert fm.encode_k(("const", 0), 8) == "11100000"
    assert fm.encode_k(fm.Var(1), 8) is None  # var token + index field + END > 8


def test_decode_rejects_noncodes():
    assert fm.decode_k("00000000") is None
    assert fm.decode_k("10101010") is None


@given(formulas(max_var=4, max_leaves=6), st.integers(8, 64))
def test_code_round_trip(f, k):
    code = fm.encode_k(f, k)
    if code is not None:
        assert len(code) == k
        assert fm.decode_k(code) == f


def test_enumerate_fitting_small_widths():
    assert {f for f in fm.enumerate_fitting(8, var_cap=8)} == {("const", 0), ("const", 1)}
    fits12 = set(fm.enumerate_fitting(12, var_cap=12))
    assert ("var", 1) in fits12 and ("not", ("const", 1)) in fits12


# ---------------------------------------------------------------------------
# tautology oracles

@given(formulas(max_var=5))
@settings(max_examples=200)
def test_brute_vs_dpll_agree(f):
    assert fm.is_tautology(f, "brute") == fm.is_tautology(f, "dpll")


def test_is_tautology_basics():
    assert fm.is_tautology(fm.parse("x1 | ~x1"))
    assert not fm.is_tautology(fm.parse("x1 | x2"))
    assert fm.is_tautology(fm.parse("1"))
    assert not fm.is_tautology(fm.parse("0"), "dpll")


@given(formulas(max_var=4))
def test_to_clauses_equisatisfiable(f):
    cs, out = fm.to_clauses(f)
    from nwtaut.cnf import dpll_solve

    cs.clauses.append([out])
    model = dpll_solve(cs)
    sat = any(
        fm.evaluate(f, {v + 1: (m >> v) & 1 for v in range(4)})
        for m in range(16)
    )
    assert (model is not None) == sat


def test_satisfying_assignment_lex_least():
    f = fm.parse("x1 & x2 | x3")
    assert fm.satisfying_assignment(f) == {1: 0, 2: 0, 3: 1}
    assert fm.satisfying_assignment(fm.parse("x1 & ~x1")) is None
