"""Conjecture and prove ``|x(n)| <= c1*|x(-1)| + c2*|x(0)|``.

The proof is an induction over parity states.  Each state ``s`` carries a
set of linear forms ``p*u + q*v`` (``u = x(n-1)``, ``v = x(n)``) all claimed
to be bounded by ``A = c1*|x(-1)| + c2*|x(0)|``.  For every transition
``s -> s'`` and every form ``G`` of ``s'`` the form is rewritten into the
coordinates of ``s`` and must be a combination of the forms of ``s`` with
absolute coefficient sum at most one (triangle inequality).  Forms that
cannot be derived are added as new hypotheses until a fixpoint is reached.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import LinForm, fmt_rat, rat
from .recurrence import (
    MAX_MAG,
    PairState,
    REACHABLE,
    RuleSpec,
    primitive_seeds,
    step,
    successors,
)

__all__ = [
    "BoundCoeffs",
    "Scheme",
    "DerivationStep",
    "SchemeProof",
    "NonClosure",
    "BoundSurvey",
    "candidate_coeffs",
    "survey_bounds",
    "conjecture_bound",
    "derive",
    "close_scheme",
    "check_base",
    "prove_bound",
    "BoundProof",
    "form_of",
    "pair_of",
]

Pair = tuple[Fraction, Fraction]  # (p, q) for p*u + q*v


def form_of(pq: Pair) -> LinForm:
    return LinForm.of({"u": pq[0], "v": pq[1]})


def pair_of(form: LinForm) -> Pair:
    extra = set(form.symbols()) - {"u", "v"}
    if extra or form.const:
        raise ValueError(f"{form} is not a form in u, v")
    return form.coeff("u"), form.coeff("v")


def fmt_pair(pq: Pair) -> str:
    return str(form_of(pq))


@dataclass(frozen=True, order=True)
class BoundCoeffs:
    c1: Fraction
    c2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c1", rat(self.c1))
        object.__setattr__(self, "c2", rat(self.c2))
        if self.c1 < 1 or self.c2 < 1:
            raise ValueError("bound coefficients must be at least 1")

    def bound(self, a: int, b: int) -> Fraction:
        return self.c1 * abs(a) + self.c2 * abs(b)

    def __str__(self) -> str:
        return f"({fmt_rat(self.c1)}, {fmt_rat(self.c2)})"


# ---------------------------------------------------------------- conjecture


def candidate_coeffs(cap=4, max_den: int = 4) -> list[BoundCoeffs]:
    """Small rationals in [1, cap], ordered by c1 + c2, then c1."""
    cap = rat(cap)
    vals = sorted(
        {
            Fraction(p, q)
            for q in range(1, max_den + 1)
            for p in range(q, int(cap * q) + 1)
        }
    )
    pairs = [BoundCoeffs(x, y) for x in vals for y in vals]
    return sorted(pairs, key=lambda c: (c.c1 + c.c2, c.c1, c.c2))


@dataclass
class BoundSurvey:
    """Largest |x| seen from every primitive seed of a grid."""

    grid: int
    peaks: dict[tuple[int, int], int | None]  # None: diverged or undecided
    witness: tuple[tuple[int, int], int, int] | None = None  # seed, step, value

    @property
    def bounded(self) -> bool:
        return all(m is not None for m in self.peaks.values())


def survey_bounds(
    rule: RuleSpec,
    grid: int,
    max_steps: int = 100_000,
    max_mag: int = MAX_MAG,
    witness_mag: int = 10**6,
) -> BoundSurvey:
    """Simulate every primitive seed, memoising the peak of each pair's future."""
    if grid < 1:
        raise ValueError("grid must be positive")
    future: dict[tuple[int, int], float] = {}
    peaks: dict[tuple[int, int], int | None] = {}
    witness = None
    inf = float("inf")
    for seed in primitive_seeds(grid):
        path: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        pair = seed
        tail = None
        steps = 0
        while True:
            if pair in future:
                tail = future[pair]
                break
            if pair in index:
                # a new cycle: every pair on it shares the cycle peak
                j = index[pair]
                peak = max(abs(p[1]) for p in path[j:])
                for p in path[j:]:
                    future[p] = peak
                path = path[:j]
                tail = peak
                break
            if abs(pair[1]) > max_mag or steps >= max_steps:
                tail = inf
                break
            index[pair] = len(path)
            path.append(pair)
            pair = (pair[1], step(rule, pair))
            steps += 1
        for p in reversed(path):
            tail = max(tail, abs(p[1]))
            future[p] = tail
        top = max(future.get(seed, tail), abs(seed[0]), abs(seed[1]))
        peaks[seed] = None if top == inf else int(top)
        if top == inf and witness is None:
            witness = _witness(rule, seed, witness_mag, max_steps)
    return BoundSurvey(grid, peaks, witness)


def _witness(rule, seed, mag, max_steps):
    u, v = seed
    for n in range(1, max_steps + 1):
        u, v = v, step(rule, (u, v))
        if abs(v) > mag:
            return seed, n, v
    return None


def conjecture_bound(
    rule: RuleSpec,
    grid: int = 100,
    cap=4,
    survey: BoundSurvey | None = None,
) -> BoundCoeffs | None:
    """Smallest candidate consistent with every simulated trajectory."""
    found = surviving_candidates(rule, grid, cap, survey, first_only=True)
    return found[0] if found else None


def surviving_candidates(rule, grid=100, cap=4, survey=None, first_only=False) -> list[BoundCoeffs]:
    return list(itertools.islice(iter_survivors(rule, grid, cap, survey), 1 if first_only else None))


def iter_survivors(rule, grid=100, cap=4, survey=None):
    """Candidates consistent with the survey, lazily, in candidate order."""
    if grid < 10:
        raise ValueError("grid must be at least 10")
    survey = survey or survey_bounds(rule, grid)
    if not survey.bounded:
        return
    # every candidate has c1, c2 >= 1, so only peaks above |a| + |b| can bite;
    # the hardest seeds go first so failing candidates are rejected quickly
    seeds = sorted(
        ((m, abs(a), abs(b)) for (a, b), m in survey.peaks.items() if m > abs(a) + abs(b)),
        key=lambda t: (-Fraction(t[0], t[1] + t[2]), t),
    )
    for c in candidate_coeffs(cap):
        if all(m <= c.c1 * a + c.c2 * b for m, a, b in seeds):
            yield c


# ---------------------------------------------------------------- derivation


def _solve2(h1: Pair, h2: Pair, t: Pair) -> tuple[Fraction, Fraction] | None:
    det = h1[0] * h2[1] - h2[0] * h1[1]
    if not det:
        return None
    c1 = (t[0] * h2[1] - h2[0] * t[1]) / det
    c2 = (h1[0] * t[1] - t[0] * h1[1]) / det
    return c1, c2


def _scalar(h: Pair, t: Pair) -> Fraction | None:
    """c with c*h == t, if any."""
    if h == (0, 0):
        return None
    c = t[0] / h[0] if h[0] else t[1] / h[1]
    return c if (c * h[0], c * h[1]) == t else None


def derive(target, hypotheses, max_terms: int = 3):
    """Write ``target`` as ``sum(c_i * h_i)`` with ``sum(|c_i|) <= 1``.

    Singles, then pairs, then triples; hypotheses in the given order.  Returns
    a list of ``(hypothesis, coefficient)`` or None.
    """
    as_forms = isinstance(target, LinForm)
    t = pair_of(target) if as_forms else tuple(rat(x) for x in target)
    hyps = [pair_of(h) if isinstance(h, LinForm) else tuple(rat(x) for x in h) for h in hypotheses]
    out = _derive(t, hyps, max_terms)
    if out is None:
        return None
    if as_forms:
        return [(form_of(h), c) for h, c in out]
    return out


def _derive(t: Pair, hyps: list[Pair], max_terms: int):
    if t == (0, 0):
        return []
    for h in hyps:
        c = _scalar(h, t)
        if c is not None and abs(c) <= 1:
            return [(h, c)]
    if max_terms < 2:
        return None
    for h1, h2 in itertools.combinations(hyps, 2):
        sol = _solve2(h1, h2, t)
        if sol is not None and abs(sol[0]) + abs(sol[1]) <= 1:
            return [(h1, sol[0]), (h2, sol[1])]
    if max_terms < 3:
        return None
    for h1, h2, h3 in itertools.combinations(hyps, 3):
        sol = _best_triple(h1, h2, h3, t)
        if sol is not None:
            return sol
    return None


def _best_triple(h1, h2, h3, t):
    # The solutions of c1 h1 + c2 h2 + c3 h3 = t form a line (or more); the
    # l1 norm is convex along it, so its minimum sits where some c_i = 0.
    best = None
    for drop in range(3):
        keep = [h for i, h in enumerate((h1, h2, h3)) if i != drop]
        sol = _solve2(keep[0], keep[1], t)
        if sol is None:
            continue
        coeffs = list(sol)
        coeffs.insert(drop, Fraction(0))
        norm = sum(abs(c) for c in coeffs)
        if norm <= 1 and (best is None or norm < best[0]):
            best = (norm, coeffs)
    if best is None:
        return None
    return [(h, c) for h, c in zip((h1, h2, h3), best[1])]


# ---------------------------------------------------------------- scheme


@dataclass(frozen=True)
class Scheme:
    forms: dict[PairState, tuple[Pair, ...]]
    coeffs: BoundCoeffs

    def form_set(self, state: PairState) -> set[LinForm]:
        return {form_of(pq) for pq in self.forms[state]}


@dataclass(frozen=True)
class DerivationStep:
    state_from: PairState
    state_to: PairState
    source: Pair  # the form of state_to being established
    target: Pair  # source rewritten into state_from coordinates
    combination: tuple[tuple[Pair, Fraction], ...]

    def check(self) -> bool:
        s = (sum(c * h[0] for h, c in self.combination), sum(c * h[1] for h, c in self.combination))
        return s == tuple(self.target) and sum(abs(c) for _, c in self.combination) <= 1


@dataclass(frozen=True)
class SchemeProof:
    scheme: Scheme
    base_checks: dict[PairState, bool]
    transitions: tuple[DerivationStep, ...]

    @property
    def valid(self) -> bool:
        return all(self.base_checks.values()) and all(d.check() for d in self.transitions)


@dataclass(frozen=True)
class NonClosure:
    reason: str  # "max-forms" or "base"
    state: PairState
    obligation: Pair
    forms: dict[PairState, tuple[Pair, ...]] = field(default_factory=dict)


def rewrite(rule: RuleSpec, state: PairState, g: Pair) -> Pair:
    """``G(v, w)`` with ``w = branch(u, v)`` expressed in ``(u, v)``."""
    cu, cv = rule.branch(state)
    p, q = g
    return q * cu, p + q * cv


def base_ok(pq: Pair, coeffs: BoundCoeffs) -> bool:
    return abs(pq[0]) <= coeffs.c1 and abs(pq[1]) <= coeffs.c2


def close_scheme(rule: RuleSpec, coeffs: BoundCoeffs, max_forms: int = 12, max_terms: int = 3):
    """Add-hypotheses fixpoint.  Returns SchemeProof or NonClosure.

    Forms are only ever added, so once an added form breaks the base bound
    the scheme can never pass :func:`check_base`; that is reported at once.
    """
    one, zero = Fraction(1), Fraction(0)
    forms: dict[PairState, list[Pair]] = {s: [(one, zero), (zero, one)] for s in REACHABLE}

    def obligations():
        for s in REACHABLE:
            for s2 in sorted(successors(rule, s), key=REACHABLE.index):
                for g in forms[s2]:
                    yield s, s2, g

    while True:
        steps = []
        failed = None
        for s, s2, g in obligations():
            tgt = rewrite(rule, s, g)
            comb = _derive(tgt, forms[s], max_terms)
            if comb is None:
                failed = (s, tgt)
                break
            steps.append(DerivationStep(s, s2, g, tgt, tuple(comb)))
        if failed is None:
            scheme = Scheme({s: tuple(forms[s]) for s in REACHABLE}, coeffs)
            return SchemeProof(scheme, _base_checks(scheme), tuple(steps))
        s, tgt = failed
        frozen = {k: tuple(v) for k, v in forms.items()}
        if not base_ok(tgt, coeffs):
            return NonClosure("base", s, tgt, frozen)
        if len(forms[s]) >= max_forms:
            return NonClosure("max-forms", s, tgt, frozen)
        forms[s].append(tgt)


def _base_checks(scheme: Scheme) -> dict[PairState, bool]:
    return {s: all(base_ok(pq, scheme.coeffs) for pq in fs) for s, fs in scheme.forms.items()}


def check_base(scheme: Scheme) -> bool:
    return all(_base_checks(scheme).values())


@dataclass
class BoundProof:
    """Outcome of the bound stage for one rule."""

    conjectured: BoundCoeffs | None
    proof: SchemeProof | None
    failure: NonClosure | None
    survey: BoundSurvey
    tried: list[BoundCoeffs]

    @property
    def coeffs(self) -> BoundCoeffs | None:
        return self.proof.scheme.coeffs if self.proof else None


def prove_bound(rule: RuleSpec, grid: int = 100, cap=4, max_forms: int = 12) -> BoundProof:
    """Conjecture, then try surviving candidates in order until a scheme closes.

    The first survivor is the conjectured bound.  When its scheme needs a
    form whose coefficients exceed it, later survivors are tried; closure
    failing on the form cap is independent of the coefficients and stops.
    """
    survey = survey_bounds(rule, grid)
    tried = []
    last = None
    for c in iter_survivors(rule, grid, cap, survey):
        tried.append(c)
        res = close_scheme(rule, c, max_forms)
        if isinstance(res, SchemeProof):
            return BoundProof(tried[0], res, None, survey, tried)
        last = res
        if res.reason != "base":
            break
    return BoundProof(tried[0] if tried else None, None, last, survey, tried)
