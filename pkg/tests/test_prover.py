import random
from fractions import Fraction

import pytest

from collatz2d.prover import (
    BoundCoeffs,
    DerivationStep,
    NonClosure,
    SchemeProof,
    candidate_coeffs,
    close_scheme,
    conjecture_bound,
    derive,
    prove_bound,
    rewrite,
)
from collatz2d.recurrence import PairState, RuleSpec, iterate, normalize

F = Fraction
CL = RuleSpec.parse("CL")
E6 = RuleSpec.parse("E6")


def forms(proof, state):
    return set(proof.scheme.forms[state])


def test_cl_bound_and_scheme():
    bp = prove_bound(CL)
    assert bp.coeffs == BoundCoeffs(1, 1)
    assert bp.proof.valid
    uv = {(F(1), F(0)), (F(0), F(1))}
    assert forms(bp.proof, PairState.OO) == uv
    assert forms(bp.proof, PairState.OE) == uv | {(F(-1), F(1))}
    assert forms(bp.proof, PairState.EO) == uv | {(F(-1), F(1))}


def test_every_step_rechecks():
    bp = prove_bound(CL)
    for d in bp.proof.transitions:
        assert d.check()
        assert rewrite(CL, d.state_from, d.source) == d.target


def test_broken_step_fails_check():
    d = DerivationStep(PairState.OO, PairState.OO, (F(0), F(1)), (F(1, 2), F(1, 2)), (((F(1), F(0)), F(1, 3)), ((F(0), F(1)), F(1, 2))))
    assert not d.check()


def test_candidates_ordered_by_sum_then_c1():
    cs = candidate_coeffs()
    keys = [(c.c1 + c.c2, c.c1) for c in cs]
    assert keys == sorted(keys)
    assert cs[0] == BoundCoeffs(1, 1)
    assert all(1 <= c.c1 <= 4 and 1 <= c.c2 <= 4 for c in cs)


def test_derive_uses_at_most_unit_mass():
    hyps = [(F(1), F(0)), (F(0), F(1))]
    comb = derive((F(1, 2), F(-1, 2)), hyps)
    assert comb is not None and sum(abs(c) for _, c in comb) <= 1
    assert derive((F(1), F(1)), hyps) is None


@pytest.mark.parametrize("agkl", [(1, 1, 1, 1), (1, -1, 1, -1)])
def test_unbounded_rules_get_no_bound(agkl):
    rule = RuleSpec.from_agkl(*agkl)
    assert conjecture_bound(rule) is None
    for c in (BoundCoeffs(1, 1), BoundCoeffs(4, 4), BoundCoeffs(2, 3)):
        assert isinstance(close_scheme(rule, c), NonClosure)


def test_e6_scheme_survives_random_simulation():
    bp = prove_bound(E6)
    assert isinstance(bp.proof, SchemeProof) and bp.proof.valid
    c = bp.coeffs
    rng = random.Random(7)
    for _ in range(10_000):
        a, b = rng.randint(-200, 200), rng.randint(-200, 200)
        if a == 0 and b == 0:
            continue
        a, b = normalize((a, b))
        if a % 2 == 0 and b % 2 == 0:
            continue
        A = c.c1 * abs(a) + c.c2 * abs(b)
        vals = iterate(E6, (a, b), 60)
        assert all(abs(x) <= A for x in vals)
