import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from collatz2d.exact import (
    AbsSum,
    Constraint,
    IneqSystem,
    LinForm,
    Region,
    UndeclaredSymbol,
    abs_branches,
    abs_expand,
    abs_leq_holds,
    fm_feasible,
    fmt_rat,
    rat,
)

small = st.integers(-4, 4)


def test_rat_parses_strings_and_ints():
    assert rat("3/6") == Fraction(1, 2)
    assert rat(4) == Fraction(4)
    assert fmt_rat(Fraction(-3, 2)) == "-3/2"


def test_linform_arithmetic():
    a, b = LinForm.var("a"), LinForm.var("b")
    f = a * 2 - b + LinForm.of(const=3)
    assert f.evaluate({"a": 1, "b": 5}) == 0
    assert (f - f).is_zero()
    assert f.coeff("a") == 2


def test_undeclared_symbol_rejected():
    with pytest.raises(UndeclaredSymbol):
        IneqSystem((Constraint(LinForm.var("z")),), ("a",))


def test_fm_simple_cases():
    a = LinForm.var("a")
    one = LinForm.of(const=1)
    # a <= 1 and a >= 1 is feasible, a < 1 and a >= 1 is not
    sys_ok = IneqSystem((Constraint(a - one), Constraint(one - a)), ("a",))
    sys_bad = IneqSystem((Constraint(a - one, strict=True), Constraint(one - a)), ("a",))
    assert fm_feasible(sys_ok)
    assert not fm_feasible(sys_bad)


def _grid_feasible(system, pts):
    return any(system.holds({"a": x, "b": y}) for x, y in pts)


@given(st.lists(st.tuples(small, small, small, st.booleans()), min_size=1, max_size=5))
def test_fm_agrees_with_a_fine_grid_when_the_grid_finds_a_point(rows):
    a, b = LinForm.var("a"), LinForm.var("b")
    cons = tuple(Constraint(a * p + b * q + LinForm.of(const=c), strict=s) for p, q, c, s in rows)
    system = IneqSystem(cons, ("a", "b"))
    pts = [(Fraction(i, 4), Fraction(j, 4)) for i in range(-40, 41) for j in range(-40, 41)]
    if _grid_feasible(system, pts):
        assert fm_feasible(system)


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=4))
def test_fm_infeasible_means_no_grid_point(rows):
    a, b = LinForm.var("a"), LinForm.var("b")
    cons = tuple(Constraint(a * p + b * q + LinForm.of(const=c)) for p, q, c in rows)
    system = IneqSystem(cons, ("a", "b"))
    if not fm_feasible(system):
        pts = [(Fraction(i, 2), Fraction(j, 2)) for i in range(-20, 21) for j in range(-20, 21)]
        assert not _grid_feasible(system, pts)


@given(small, small, small, small, st.integers(0, 3), st.integers(0, 3))
def test_abs_expand_union_matches_pointwise_truth(p, q, r, s, w1, w2):
    a, b = LinForm.var("a"), LinForm.var("b")
    lhs = a * p + b * q
    rhs = AbsSum(LinForm(), ((w1, a * r + b), (w2, a - b * s)))
    branches = list(abs_branches(lhs, rhs, ("a", "b")))
    for x, y in itertools.product(range(-6, 7), repeat=2):
        env = {"a": x, "b": y}
        assert abs_leq_holds(lhs, rhs, env) == any(br.holds(env) for br in branches)


def test_abs_expand_shape():
    a, b = LinForm.var("a"), LinForm.var("b")
    system = abs_expand(a, AbsSum(LinForm(), ((1, b),)), (1,))
    assert len(system.constraints) == 3
    assert system.holds({"a": 1, "b": 2}) and not system.holds({"a": 3, "b": 2})


def test_region_refine_keeps_exact_intervals():
    r = Region.positive().refine(lambda t: t <= 2, [Fraction(2)])
    assert r.contains(2) and not r.contains(Fraction(5, 2)) and r.contains(Fraction(1, 3))
    assert not r.contains(0)
    empty = r.refine(lambda t: t > 3, [Fraction(3)])
    assert not empty


@given(st.lists(st.tuples(small, small, small, st.booleans()), min_size=1, max_size=5),
       st.lists(st.integers(1, 9), min_size=5, max_size=5), st.booleans())
def test_fm_invariant_under_scaling_and_reordering(rows, scales, swap):
    a, b = LinForm.var("a"), LinForm.var("b")
    cons = [Constraint(a * p + b * q + LinForm.of(const=c), strict=s) for p, q, c, s in rows]
    base = fm_feasible(IneqSystem(tuple(cons), ("a", "b")))
    scaled = tuple(Constraint(con.form * Fraction(k, 3), strict=con.strict) for con, k in zip(cons, scales))
    order = ("b", "a") if swap else ("a", "b")
    assert fm_feasible(IneqSystem(scaled[::-1], order)) == base
