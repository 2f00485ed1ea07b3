from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from collatz2d.cycles import (
    ExpPoly,
    TailVerdict,
    collect_cycles,
    concrete_cycle_matrix,
    concrete_products,
    cycle_matrix,
    det_condition,
    eigen_split,
    extract_cycles,
    mat_eval,
    solve_zeros,
    transfer,
)
from collatz2d.families import Family
from collatz2d.recurrence import Cycle, RuleSpec

F = Fraction
CL = RuleSpec.parse("CL")
E6 = RuleSpec.parse("E6")


def fam(text):
    return Family.from_program(text)


def direct_det(rule, f, exps):
    A = concrete_cycle_matrix(rule, f.instance(exps))
    return (A[0][0] - 1) * (A[1][1] - 1) - A[0][1] * A[1][0]


def test_exppoly_algebra():
    p = ExpPoly.build(1, [((F(2),), F(1)), ((F(1),), F(-1))])
    assert p.evaluate((3,)) == 7
    assert (p * p).evaluate((2,)) == 9
    assert (p - p).is_zero()
    assert p.restrict({0: 1}).evaluate((3,)) == p.evaluate((3,))
    r = ExpPoly.build(1, [((F(-2),), F(1))])
    assert r.restrict({0: 1}).evaluate((3,)) == -8


def test_eigen_split_reconstructs_powers():
    W = ((F(0), F(1)), (F(1, 2), F(1, 2)))
    parts = eigen_split(W)
    M = ((F(1), F(0)), (F(0), F(1)))
    for n in range(1, 6):
        M = tuple(tuple(sum(W[i][k] * M[k][j] for k in range(2)) for j in range(2)) for i in range(2))
        S = tuple(tuple(sum(lam**n * P[i][j] for lam, P in parts) for j in range(2)) for i in range(2))
        assert S == M


def test_cycle_matrix_maps_seed_to_seed():
    A = concrete_cycle_matrix(CL, "011011")
    # the negated 6-cycle starting x(-1) = 2, x(0) = -1
    assert (A[0][0] * 2 + A[0][1] * -1, A[1][0] * 2 + A[1][1] * -1) == (2, -1)


@given(st.integers(1, 12))
def test_closed_form_matches_direct_product_1d(m):
    for rule, prog in ((CL, "|[211]^1|21|-"), (E6, "|[211]^1||+"), (CL, "12|[1]^3|2|-")):
        f = fam(prog)
        if m < f.lows[0]:
            continue
        cond = det_condition(rule, f)
        assert cond.det.evaluate((m,)) == direct_det(rule, f, (m,))
        assert mat_eval(cycle_matrix(rule, f, (None,)), (m,)) == concrete_cycle_matrix(rule, f.instance((m,)))


@given(st.integers(1, 8), st.integers(2, 8))
def test_closed_form_matches_direct_product_2d(m1, m2):
    f = fam("|[211]^1||[1]^2||-")
    cond = det_condition(CL, f)
    assert cond.det.evaluate((m1, m2)) == direct_det(CL, f, (m1, m2))


def test_incremental_products_match_direct(cl_cycle_families):
    for f in cl_cycle_families:
        for exps, A in concrete_products(CL, f, 9):
            assert A == concrete_cycle_matrix(CL, f.instance(exps))


def test_e6_determinant_oracle():
    # frozen from an exact hand expansion of the (011)^m product
    f = fam("|[211]^1||+")
    det = det_condition(E6, f).det
    for m in range(1, 65):
        want = -(F(-1) ** m) + 1 - F(-1, 2) ** m + F(1, 2) ** m
        assert det.evaluate((m,)) == want
    assert det.evaluate((1,)) == 3


def test_e6_families_give_no_cycles():
    for prog in ("|[211]^1||+", "|[211]^1|21|+", "|[211]^1|1|+"):
        zs = solve_zeros(E6, det_condition(E6, fam(prog)), 64)
        assert zs.verdict != TailVerdict.BOUNDED_ONLY
        assert extract_cycles(E6, zs) == []


def test_cl_cycle_list(cl_cycle_families):
    zsets = [solve_zeros(CL, det_condition(CL, f), 64) for f in cl_cycle_families]
    cl = collect_cycles(CL, zsets)
    assert cl.complete
    assert set(cl.cycles) == {Cycle.of((1,)), Cycle.of((-1,)), Cycle.of((-2, 1, 3, 2, -1, -3))}
    verdicts = {zs.family.human(): zs.verdict for zs in zsets}
    assert verdicts["(011)^{m1}"] == TailVerdict.RIGOROUS_FIXED_NULL


@pytest.mark.parametrize("prog", ["|[211]^1||[1]^2||-", "|[211]^1||-", "12|[1]^3||-"])
def test_zeros_stable_in_the_exponent_bound(prog):
    f = fam(prog)
    cond = det_condition(CL, f)
    a = solve_zeros(CL, cond, 24)
    b = solve_zeros(CL, cond, 48)
    assert a.verdict == b.verdict
    small = {z for z in b.zeros if max(z) <= 24}
    assert small == {z for z in a.zeros if max(z) <= 24}


def test_transfer_shape():
    T = transfer(CL, "1", "1")
    assert T == ((0, 1), (F(1, 2), F(1, 2)))


@pytest.mark.parametrize("name", ["CL", "E6", "(1,1,1,-1)", "(1,-1,-1,-1)"])
def test_nonzero_verdicts_stay_zero_free_at_four_times_the_bound(name):
    from conftest import pipeline
    from collatz2d.families import cycle_families
    rule, _, _, fams = pipeline(name)
    for f in cycle_families(fams):
        cond = det_condition(rule, f)
        small = solve_zeros(rule, cond, 16)
        if small.verdict != TailVerdict.RIGOROUS_NONZERO:
            continue
        big = solve_zeros(rule, cond, 64)
        assert {z for z in big.zeros if max(z, default=0) > 16} == set(), f.human()


@pytest.mark.parametrize("name", ["CL", "(1,1,1,-1)", "(1,-1,1,1)", "(1,-1,-1,-1)"])
def test_extracted_cycles_close_and_are_primitive(name):
    from conftest import pipeline
    from collatz2d.families import cycle_families
    from collatz2d.recurrence import odd_gcd, verify_cycle
    rule, _, _, fams = pipeline(name)
    for f in cycle_families(fams):
        for c in extract_cycles(rule, solve_zeros(rule, det_condition(rule, f), 64)):
            assert verify_cycle(rule, c.values)
            assert odd_gcd(c.values) == 1
