import pytest
from hypothesis import given, strategies as st

from nwtaut.cnf import ClauseSet, CnfError, dpll_solve, parse_dimacs


def brute_models(cs: ClauseSet):
    out = []
    for m in range(1 << cs.nvars):
        a = {v: (m >> (v - 1)) & 1 for v in range(1, cs.nvars + 1)}
        if all(any(a[abs(l)] == (1 if l > 0 else 0) for l in cl) for cl in cs.clauses):
            out.append(a)
    return out


def clause_sets(max_vars=5, max_clauses=8):
    def build(data):
        nvars, cls = data
        return ClauseSet([list(c) for c in cls], nvars)

    return st.integers(1, max_vars).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.lists(
                    st.integers(1, n).flatmap(
                        lambda v: st.sampled_from([v, -v])
                    ),
                    min_size=1, max_size=4, unique_by=abs,
                ),
                max_size=max_clauses,
            ),
        ).map(build)
    )


@given(clause_sets())
def test_dpll_agrees_with_brute_force(cs):
    models = brute_models(cs)
    got = dpll_solve(cs)
    if not models:
        assert got is None
    else:
        # lexicographically least: compare as bit strings v1..vn
        least = min(models, key=lambda a: [a[v] for v in sorted(a)])
        assert got == least


def test_dpll_fixed_assumptions():
    cs = ClauseSet([[1, 2]], 2)
    assert dpll_solve(cs, fixed={1: 0}) == {1: 0, 2: 1}
    assert dpll_solve(cs, fixed={1: 0, 2: 0}) is None


def test_dimacs_round_trip():
    cs = ClauseSet([[1, -2], [2, 3], [-1]], 3, comments=["meta x=1"])
    back = parse_dimacs(cs.to_dimacs())
    assert back.clauses == cs.clauses
    assert back.nvars == 3
    assert back.comments == ["meta x=1"]


def test_dimacs_rejects_malformed():
    with pytest.raises(CnfError):
        parse_dimacs("p cnf 2\n1 0\n")
    with pytest.raises(CnfError):
        parse_dimacs("1 -2 0\n")  # missing header


def test_validate_rejects_out_of_range():
    with pytest.raises(CnfError):
        ClauseSet([[3]], 2).validate()
    with pytest.raises(CnfError):
        ClauseSet([[0]], 2).validate()
