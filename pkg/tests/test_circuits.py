import pytest
from hypothesis import given, settings, strategies as st

from nwtaut import circuits as cc
from nwtaut import formulas as fm


def xor_chain(n):
    b = cc.CircuitBuilder([("a", n)])
    out = b.inp("a", 1)
    for i in range(2, n + 1):
        out = b.XOR(out, b.inp("a", i))
    return b.build([out])


def test_eval_basic_gates():
    b = cc.CircuitBuilder([("p", 2)])
    g = b.AND(b.inp("p", 1), b.NOT(b.inp("p", 2)))
    circ = b.build([g])
    assert cc.eval_circuit(circ, {"p": "10"}) == "1"
    assert cc.eval_circuit(circ, {"p": "11"}) == "0"


@given(st.integers(2, 6), st.integers(0, 63))
def test_xor_chain_is_parity(n, v):
    bits = format(v % (1 << n), f"0{n}b")
    circ = xor_chain(n)
    assert cc.eval_circuit(circ, {"a": bits}) == str(bits.count("1") % 2)


def test_const_wire_is_constant():
    b = cc.CircuitBuilder([("a", 2)])
    circ = b.build([b.const(1), b.const(0)])
    for bits in ("00", "01", "10", "11"):
        assert cc.eval_circuit(circ, {"a": bits}) == "10"


def test_equals_const():
    b = cc.CircuitBuilder([("a", 3)])
    circ = b.build([b.equals_const([b.inp("a", i) for i in (1, 2, 3)], "101")])
    assert cc.eval_circuit(circ, {"a": "101"}) == "1"
    assert cc.eval_circuit(circ, {"a": "100"}) == "0"


def test_opaque_gate_needs_oracle():
    b = cc.CircuitBuilder([("a", 2)])
    g = b.opaque("maj", [b.inp("a", 1), b.inp("a", 2)])
    circ = b.build([g])
    with pytest.raises(cc.CircuitError):
        cc.eval_circuit(circ, {"a": "11"})
    assert cc.eval_circuit(circ, {"a": "11"}, {"maj": lambda t: sum(t) == 2}) == "1"


def test_serialize_round_trip():
    b = cc.CircuitBuilder([("a", 2), ("z", 1)])
    g = b.OR(b.XOR(b.inp("a", 1), b.inp("a", 2)), b.inp("z", 1))
    o = b.opaque("f", [g])
    circ = b.build([g, o])
    assert cc.parse_circuit(cc.serialize(circ)) == circ


def test_parse_circuit_rejects_malformed():
    with pytest.raises(cc.CircuitError):
        cc.parse_circuit("group a 2\n")  # missing header
    with pytest.raises(cc.CircuitError):
        cc.parse_circuit("circuit\ngroup a 1\ng0 = FROB a:1\noutput g0\n")


# ---------------------------------------------------------------------------
# clause / formula translations

@given(st.integers(0, 15))
def test_circuit_clauses_match_evaluation(v):
    b = cc.CircuitBuilder([("a", 4)])
    g = b.OR(b.AND(b.inp("a", 1), b.inp("a", 2)), b.XOR(b.inp("a", 3), b.inp("a", 4)))
    circ = b.build([g])
    bits = format(v, "04b")
    cs, outs = cc.circuit_clauses(circ)
    from nwtaut.cnf import dpll_solve

    fixed = {i + 1: int(bits[i]) for i in range(4)}
    model = dpll_solve(cs, fixed=fixed)
    assert model is not None  # computation vars are forced, never blocked
    assert str(model[abs(outs[0])]) == cc.eval_circuit(circ, {"a": bits})


@given(st.integers(0, 15))
def test_circuit_to_formula_unique_computation(v):
    b = cc.CircuitBuilder([("a", 2)])
    g = b.XOR(b.inp("a", 1), b.inp("a", 2))
    circ = b.build([g])
    cf = cc.circuit_to_formula(circ)
    bits = format(v % 4, "02b")
    base = {cf.input_vars[i]: int(bits[i]) for i in range(2)}
    good = 0
    for m in range(1 << len(cf.gate_vars)):
        a = dict(base)
        a.update({gv: (m >> i) & 1 for i, gv in enumerate(cf.gate_vars)})
        if fm.evaluate(cf.correct, a) == 1:
            good += 1
            assert str(a[cf.out_vars[0]]) == cc.eval_circuit(circ, {"a": bits})
    assert good == 1


def test_gate_formulas_exact_structure():
    b = cc.CircuitBuilder([("a", 1)])
    g = b.AND(b.inp("a", 1), b.NOT(b.inp("a", 1)))
    circ = b.build([g])
    out = cc.gate_formulas(circ, {0: ("var", 7)})
    assert out[2] == ("and", ("var", 7), ("not", ("var", 7)))


def test_sat_search_explicit_lex_least():
    b = cc.CircuitBuilder([("a", 3)])
    g = b.OR(b.AND(b.inp("a", 1), b.inp("a", 2)), b.inp("a", 3))
    circ = b.build([g])
    assert cc.sat_search(circ) == {"a": "001"}
    assert cc.sat_search(circ, fixed={"a": "110"}) == {}
    b2 = cc.CircuitBuilder([("a", 2)])
    unsat = b2.build([b2.AND(b2.inp("a", 1), b2.NOT(b2.inp("a", 1)))])
    assert cc.sat_search(unsat) is None


def test_sat_search_opaque_budget():
    b = cc.CircuitBuilder([("a", 25)])
    g = b.opaque("f", [b.inp("a", 1)])
    circ = b.build([g])
    with pytest.raises(fm.BudgetError):
        cc.sat_search(circ, budget=20, oracles={"f": lambda t: True})


def test_inline_composition():
    inner_b = cc.CircuitBuilder([("p", 2)])
    inner = inner_b.build([inner_b.AND(inner_b.inp("p", 1), inner_b.inp("p", 2))])
    b = cc.CircuitBuilder([("a", 2)])
    (w,) = cc.inline(b, inner, [b.inp("a", 2), b.inp("a", 1)])
    circ = b.build([w])
    assert cc.eval_circuit(circ, {"a": "11"}) == "1"
    assert cc.eval_circuit(circ, {"a": "10"}) == "0"


# ---------------------------------------------------------------------------
# the universal evaluator

@pytest.mark.parametrize("k,trim", [(8, False), (8, True), (12, False)])
def test_universal_evaluator_contract(k, trim):
    E = cc.universal_evaluator(k, trim=trim)
    for f in fm.enumerate_fitting(k, var_cap=k):
        code = fm.encode_k(f, k)
        for uv in (0, (1 << k) - 1, 0b0101 % (1 << k)):
            u = format(uv, f"0{k}b")
            a = {i + 1: int(u[i]) for i in range(k)}
            assert cc.eval_circuit(E, {"u": u, "x": code}) == str(fm.evaluate(f, a))


def test_universal_evaluator_code_determined_at_small_k():
    # no variable formula fits 10 code bits, so no gate may read u
    for k in (8, 9, 10):
        E = cc.universal_evaluator(k, trim=True)
        for g in E.gates:
            assert all(a >= k for a in g[1:])


def test_universal_evaluator_cap():
    with pytest.raises(fm.BudgetError):
        cc.universal_evaluator(21)
