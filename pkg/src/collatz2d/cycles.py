"""Cycles of a parametric family, via the transfer product.

One step of a rule in pair state ``(p, q)`` is the linear map
``T(u, v) = (v, cu*u + cv*v)``.  A parity sequence ``e0..e(L-1)`` read as a
cycle multiplies the ``L`` transfers of its cyclic pairs, and a cycle with
that sequence exists only when the product ``M`` has eigenvalue one.  The
starting pair ``(x(-1), x(0))`` is then a null vector of ``M - I``.

For a family the product is a matrix of exponential polynomials
(:class:`ExpPoly`) in the block exponents.  Each steady block matrix is
diagonalised over the rationals, so ``W**n = sum(lam**n * P_lam)``.

Zeros of ``det(M - I)`` are found exactly up to ``M_max``.  Past it the
exponents are split by parity, and in each class one of two things is
shown.  Either one term dominates and the determinant never vanishes, or
the determinant vanishes identically with a null direction independent of
the exponents, so the class adds no new starting pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .families import Family
from .recurrence import Cycle, PairState, RuleSpec, simulate, step, CycleReached

__all__ = [
    "ExpPoly",
    "Mat",
    "NoClosedForm",
    "transfer",
    "block_power",
    "segment_product",
    "cycle_matrix",
    "DetCondition",
    "det_condition",
    "TailVerdict",
    "ClassVerdict",
    "ZeroSet",
    "solve_zeros",
    "concrete_zero_set",
    "extract_cycles",
    "axis_cases",
    "CycleList",
    "collect_cycles",
]

F0, F1 = Fraction(0), Fraction(1)
NAMES = ("m1", "m2")


class NoClosedForm(Exception):
    """A block matrix is not diagonalisable over the rationals."""


# ---------------------------------------------------------------- ExpPoly


@dataclass(frozen=True)
class ExpPoly:
    """Finite sum ``sum c * prod(base_i ** m_i)`` over rational bases."""

    nvars: int
    terms: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()

    @classmethod
    def build(cls, nvars: int, items: Iterable[tuple[tuple[Fraction, ...], Fraction]]) -> "ExpPoly":
        acc: dict[tuple[Fraction, ...], Fraction] = {}
        for key, c in items:
            if len(key) != nvars:
                raise ValueError("base tuple has the wrong length")
            if not all(type(b) is Fraction for b in key):
                key = tuple(Fraction(b) for b in key)
            acc[key] = acc.get(key, F0) + c
        return cls(nvars, tuple(sorted((k, c) for k, c in acc.items() if c != 0)))

    @classmethod
    def const(cls, nvars: int, c) -> "ExpPoly":
        c = Fraction(c)
        return cls(nvars, (((F1,) * nvars, c),) if c else ())

    def as_dict(self) -> dict[tuple[Fraction, ...], Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly.build(self.nvars, list(self.terms) + list(other.terms))

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(self.nvars, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other) -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            k = Fraction(other)
            return ExpPoly.build(self.nvars, [(b, c * k) for b, c in self.terms])
        items = []
        for b1, c1 in self.terms:
            for b2, c2 in other.terms:
                items.append((tuple(x * y for x, y in zip(b1, b2)), c1 * c2))
        return ExpPoly.build(self.nvars, items)

    __rmul__ = __mul__

    def evaluate(self, exps: tuple[int, ...]) -> Fraction:
        total = F0
        for key, c in self.terms:
            v = c
            for b, m in zip(key, exps):
                v *= b**m
            total += v
        return total

    def substitute(self, var: int, value: int) -> "ExpPoly":
        items = []
        for key, c in self.terms:
            items.append((key[:var] + (F1,) + key[var + 1:], c * key[var] ** value))
        return ExpPoly.build(self.nvars, items)

    def restrict(self, parities: dict[int, int]) -> "ExpPoly":
        """Fold signs of negative bases for ``m_i = parities[i] (mod 2)``."""
        items = []
        for key, c in self.terms:
            new = list(key)
            for i, r in parities.items():
                if key[i] < 0:
                    new[i] = -key[i]
                    if r % 2:
                        c = -c
            items.append((tuple(new), c))
        return ExpPoly.build(self.nvars, items)

    def bases(self, var: int) -> set[Fraction]:
        return {key[var] for key, _ in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in sorted(self.terms, key=lambda kc: tuple(-abs(b) for b in kc[0])):
            factors = []
            for i, b in enumerate(key):
                if b == 1:
                    continue
                name = NAMES[i] if self.nvars > 1 else "m"
                bs = str(b) if b.denominator == 1 and b > 0 else f"({b})"
                factors.append(f"{bs}^{name}")
            if not factors:
                parts.append(("-" if c < 0 else "+", str(abs(c))))
            elif abs(c) == 1:
                parts.append(("-" if c < 0 else "+", "*".join(factors)))
            else:
                parts.append(("-" if c < 0 else "+", f"{abs(c)}*" + "*".join(factors)))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# ---------------------------------------------------------------- matrices

Mat = tuple[tuple[ExpPoly, ExpPoly], tuple[ExpPoly, ExpPoly]]
QMat = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def qmul(A: QMat, B: QMat) -> QMat:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


QI: QMat = ((F1, F0), (F0, F1))


def lift(A: QMat, nvars: int) -> Mat:
    return tuple(tuple(ExpPoly.const(nvars, x) for x in row) for row in A)  # type: ignore[return-value]


def mmul(A: Mat, B: Mat) -> Mat:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def mat_eval(A: Mat, exps: tuple[int, ...]) -> QMat:
    return tuple(tuple(x.evaluate(exps) for x in row) for row in A)  # type: ignore[return-value]


def mat_det(A: Mat) -> ExpPoly:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def minus_identity(A: Mat) -> Mat:
    n = A[0][0].nvars
    one = ExpPoly.const(n, 1)
    return ((A[0][0] - one, A[0][1]), (A[1][0], A[1][1] - one))


def transfer(rule: RuleSpec, p_prev: str, p_cur: str) -> QMat:
    cu, cv = rule.branch(PairState.of(int(p_prev), int(p_cur)))
    return ((F0, F1), (cu, cv))


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def eigen_split(W: QMat) -> list[tuple[Fraction, QMat]]:
    """``[(lam, P)]`` with ``W**n = sum(lam**n * P)``; raises NoClosedForm."""
    tr = W[0][0] + W[1][1]
    det = W[0][0] * W[1][1] - W[0][1] * W[1][0]
    disc = tr * tr - 4 * det
    if disc == 0:
        lam = tr / 2
        if W == ((lam, F0), (F0, lam)):
            return [(lam, QI)]
        raise NoClosedForm(f"defective block matrix {W}")
    r = _rational_sqrt(disc)
    if r is None:
        raise NoClosedForm(f"irrational eigenvalues of {W}")
    l1, l2 = (tr + r) / 2, (tr - r) / 2

    def proj(lam, other):
        k = 1 / (lam - other)
        return (
            ((W[0][0] - other) * k, W[0][1] * k),
            (W[1][0] * k, (W[1][1] - other) * k),
        )

    return [(l1, proj(l1, l2)), (l2, proj(l2, l1))]


def block_power(W: QMat, var: int, nvars: int, offset: int) -> Mat:
    """``W ** (m_var - offset)`` as a matrix of exponential polynomials."""
    entries = [[[], []], [[], []]]
    for lam, P in eigen_split(W):
        key = tuple(lam if i == var else F1 for i in range(nvars))
        scale = lam ** (-offset)
        for i in range(2):
            for j in range(2):
                if P[i][j] != 0:
                    entries[i][j].append((key, P[i][j] * scale))
    return tuple(tuple(ExpPoly.build(nvars, e) for e in row) for row in entries)  # type: ignore[return-value]


def _steady(rule: RuleSpec, block: str) -> QMat:
    M = QI
    prev = block[-1]
    for ch in block:
        M = qmul(transfer(rule, prev, ch), M)
        prev = ch
    return M


def _lmul(A: QMat, B: Mat) -> Mat:
    """Constant matrix times a matrix of exponential polynomials."""
    return tuple(
        tuple(B[0][j] * A[i][0] + B[1][j] * A[i][1] for j in range(2)) for i in range(2)
    )  # type: ignore[return-value]


def segment_product(
    rule: RuleSpec,
    fam: Family,
    exps: tuple[int | None, ...],
    *,
    pred: str | None,
    skip_first: bool = False,
    post: int = 0,
    record: int = 0,
) -> tuple[Mat, list[Mat]]:
    """Product of the transfers of every character of an instance.

    Character ``e_k`` contributes ``T(e_(k-1), e_k)``; ``pred`` is the
    character before the first one.  ``None`` in ``exps`` marks a symbolic
    exponent, handled as one concrete repetition, then the steady matrix to
    the power ``m - 1 - post``, then ``post`` more concrete repetitions.  The
    result is valid for ``m >= 1 + post``.  With ``record > 0`` the last
    ``record`` partial products after the final symbolic power are returned
    as well.
    """
    nvars = fam.arity
    acc: QMat = QI  # concrete product since the last symbolic power
    cur: Mat | None = None  # everything up to the last symbolic power
    snaps: list[QMat] = [QI]
    prev = pred
    first = True

    def push(ch):
        nonlocal acc, prev, first
        if first and skip_first:
            first = False
            prev = ch
            return
        first = False
        acc = qmul(transfer(rule, prev, ch), acc)
        prev = ch
        if record:
            snaps.append(acc)
            del snaps[:-record]

    for var, (piece, m) in enumerate_pieces(fam, exps):
        if m == "lit":
            for ch in piece:
                push(ch)
        elif m is not None:
            for _ in range(m):
                for ch in piece:
                    push(ch)
        else:
            for ch in piece:
                push(ch)
            P = block_power(_steady(rule, piece), var, nvars, 1 + post)
            cur = mmul(P, lift(acc, nvars) if cur is None else _lmul(acc, cur))
            acc = QI
            snaps = [QI]
            for _ in range(post):
                for ch in piece:
                    push(ch)
    if cur is None:
        final = lift(acc, nvars)
        return final, ([final] if record else [])
    hist = [_lmul(q, cur) for q in snaps] if record else []
    return _lmul(acc, cur), hist


def enumerate_pieces(fam: Family, exps) -> Iterator[tuple[int, tuple[str, object]]]:
    yield -1, (fam.prefix, "lit")
    for i, (b, _) in enumerate(fam.blocks):
        yield i, (b, exps[i])
        if i < len(fam.mids):
            yield -1, (fam.mids[i], "lit")
    yield -1, (fam.suffix, "lit")


def _ends(fam: Family, exps) -> tuple[str, str]:
    probe = tuple(max(low, 1) if m is None else m for m, low in zip(exps, fam.lows))
    s = fam.instance(probe)
    return s[0], s[-1]


def cycle_matrix(rule: RuleSpec, fam: Family, exps: tuple[int | None, ...]) -> Mat:
    """Product ``M`` with ``M (x(-1), x(0)) = (x(L-1), x(L))`` around the cycle."""
    first, last = _ends(fam, exps)
    body, _ = segment_product(rule, fam, exps, pred=None, skip_first=True)
    return mmul(lift(transfer(rule, last, first), fam.arity), body)


def concrete_cycle_matrix(rule: RuleSpec, seq: str) -> QMat:
    M = QI
    for k in range(1, len(seq)):
        M = qmul(transfer(rule, seq[k - 1], seq[k]), M)
    return qmul(transfer(rule, seq[-1], seq[0]), M)


# ---------------------------------------------------------------- det condition


@dataclass(frozen=True)
class DetCondition:
    family: Family
    det: ExpPoly  # det(M - I); valid when every exponent is >= 1
    matrix: Mat  # M - I

    def __str__(self) -> str:
        return f"det(M - I) = {self.det}"


def det_condition(rule: RuleSpec, fam: Family) -> DetCondition:
    if any(low < 1 for low in fam.lows):
        raise ValueError("split off zero exponents first (see cycle_families)")
    exps = tuple(None for _ in fam.blocks)
    Mi = minus_identity(cycle_matrix(rule, fam, exps))
    return DetCondition(fam, mat_det(Mi), Mi)


# ---------------------------------------------------------------- zeros


class TailVerdict:
    RIGOROUS_NONZERO = "RIGOROUS_NONZERO"
    RIGOROUS_FIXED_NULL = "RIGOROUS_FIXED_NULL"
    BOUNDED_ONLY = "BOUNDED_ONLY"


@dataclass(frozen=True)
class ClassVerdict:
    region: str  # which exponents are past M_max, e.g. "m1>M, m2=5"
    parities: tuple[int, ...]  # of the symbolic exponents, in order
    kind: str  # "nonzero", "fixed-null", "open"
    detail: str = ""
    symbolic: tuple[int, ...] = ()  # exponent indices past M_max
    fixed: tuple[tuple[int, int], ...] = ()  # (index, value) of the others
    null: tuple[Fraction, Fraction] | None = None


@dataclass
class ZeroSet:
    family: Family
    zeros: list[tuple[int, ...]]
    verdict: str
    classes: list[ClassVerdict] = field(default_factory=list)
    degenerate: list[tuple[int, ...]] = field(default_factory=list)  # M = I


def _dominance_1d(p: ExpPoly, var: int, start: int, limit: int = 4096):
    """Either ("nonzero", detail, extra_zeros) or ("zero", ...) or ("open", ...).

    ``p`` is restricted to one parity class and has only ``var`` free.  The
    class runs over ``start, start + 2, ...``.
    """
    if p.is_zero():
        return "zero", "vanishes identically", []
    terms = sorted(((key[var], c) for key, c in p.terms), reverse=True)
    top, ctop = terms[0]
    rest = terms[1:]

    def remainder(m):
        return sum(abs(c) * (b / top) ** m for b, c in rest)

    m = start
    while remainder(m) >= abs(ctop):
        m += 2
        if m - start > limit:
            return "open", "dominance threshold too far out", []
    extra = []
    for k in range(start, m, 2):
        if p.evaluate(tuple(k if i == var else 0 for i in range(p.nvars))) == 0:
            extra.append(k)
    sign = "+" if ctop > 0 else "-"
    return "nonzero", f"{sign}{ctop}*{top}^m dominates from m={m}", extra


def _dominance_2d(p: ExpPoly, start: tuple[int, int]):
    if p.is_zero():
        return "zero", "vanishes identically"
    keys = [key for key, _ in p.terms]
    t1 = max(k[0] for k in keys)
    t2 = max(k[1] for k in keys)
    coef = p.as_dict().get((t1, t2))
    if coef is None:
        return "open", "no componentwise dominant term"
    rest = sum(
        abs(c) * (k[0] / t1) ** start[0] * (k[1] / t2) ** start[1]
        for k, c in p.terms
        if k != (t1, t2)
    )
    if rest < abs(coef):
        return "nonzero", f"{coef}*{t1}^m1*{t2}^m2 dominates"
    return "open", "remainder too large at the threshold"


def _null_vector(A: QMat) -> tuple[Fraction, Fraction] | None:
    """A nonzero vector with ``A v = 0`` for a rank-one ``A``."""
    for row in A:
        if row[0] != 0 or row[1] != 0:
            return (row[1], -row[0])
    return None


def _apply(A: Mat, v) -> tuple[ExpPoly, ExpPoly]:
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def _grid(fam: Family, M: int) -> Iterator[tuple[int, ...]]:
    ranges = [range(low, M + 1) for low in fam.lows]

    def rec(i, acc):
        if i == len(ranges):
            yield tuple(acc)
            return
        for m in ranges[i]:
            yield from rec(i + 1, acc + [m])

    yield from rec(0, [])


def _primitive(v) -> tuple[Fraction, Fraction]:
    """Scale a nonzero rational vector to coprime integers, first nonzero entry positive."""
    den = math.lcm(v[0].denominator, v[1].denominator)
    a, b = int(v[0] * den), int(v[1] * den)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return Fraction(a), Fraction(b)


def _fixed_null_1d(rule, fam, Mi: Mat, var, parity, start, fixed: dict[int, int]):
    """Certify that ``Mi`` has a null direction independent of ``m_var``."""
    probe = tuple(fixed.get(i, start) for i in range(fam.arity))
    A = mat_eval(Mi, probe)
    v = _null_vector(A)
    if v is None:
        return None
    v = _primitive(v)
    img = _apply(Mi, v)
    cls = {var: parity}
    sub = []
    for e in img:
        for i, val in fixed.items():
            e = e.substitute(i, val)
        sub.append(e.restrict(cls))
    if not all(e.is_zero() for e in sub):
        return None
    for row in Mi:
        for e in row:
            for i, val in fixed.items():
                e = e.substitute(i, val)
            kind, detail, extra = _dominance_1d(e.restrict(cls), var, start)
            if kind == "nonzero" and not extra:
                return v
    return None


def _fixed_null_2d(Mi: Mat, parities, start):
    A = mat_eval(Mi, start)
    v = _null_vector(A)
    if v is None:
        return None
    v = _primitive(v)
    cls = {0: parities[0], 1: parities[1]}
    if not all(e.restrict(cls).is_zero() for e in _apply(Mi, v)):
        return None
    for row in Mi:
        for e in row:
            if _dominance_2d(e.restrict(cls), start)[0] == "nonzero":
                return v
    return None


def _first_in_class(threshold: int, parity: int) -> int:
    m = threshold + 1
    return m if m % 2 == parity % 2 else m + 1


def _run_chars(rule: RuleSpec, chars: str, pred: str | None, M: QMat = QI) -> QMat:
    for ch in chars:
        if pred is not None:
            M = qmul(transfer(rule, pred, ch), M)
        pred = ch
    return M


def concrete_products(rule: RuleSpec, fam: Family, M_max: int) -> Iterator[tuple[tuple[int, ...], QMat]]:
    """``(exps, M)`` over the grid ``low_i <= m_i <= M_max``, built incrementally.

    Every exponent must be at least one, so the characters around each block
    are fixed and ``M = L(m2) R(m1)`` splits into independent factors.
    """
    if any(low < 1 for low in fam.lows):
        raise ValueError("exponents must start at one or more")
    if fam.arity == 0:
        seq = fam.instance(())
        if len(seq) >= 2:
            yield (), concrete_cycle_matrix(rule, seq)
        return
    first, last = _ends(fam, (None,) * fam.arity)
    wrap = transfer(rule, last, first)
    b1 = fam.blocks[0][0]
    R1 = _run_chars(rule, fam.prefix + b1, None)
    W1 = _steady(rule, b1)
    rights = {}
    R = R1
    for m in range(1, M_max + 1):
        if m >= fam.lows[0]:
            rights[m] = R
        R = qmul(W1, R)
    if fam.arity == 1:
        tail = qmul(wrap, _run_chars(rule, fam.suffix, b1[-1]))
        for m, R in rights.items():
            yield (m,), qmul(tail, R)
        return
    b2 = fam.blocks[1][0]
    F = _run_chars(rule, fam.mids[0] + b2, b1[-1])
    W2 = _steady(rule, b2)
    tail = qmul(wrap, _run_chars(rule, fam.suffix, b2[-1]))
    lefts = {}
    G = F
    for m in range(1, M_max + 1):
        if m >= fam.lows[1]:
            lefts[m] = qmul(tail, G)
        G = qmul(W2, G)
    for m1, R in rights.items():
        for m2, Lm in lefts.items():
            yield (m1, m2), qmul(Lm, R)


def _concrete_zeros(rule: RuleSpec, fam: Family, M_max: int):
    zeros, degenerate = [], []
    for exps, A in concrete_products(rule, fam, M_max):
        Ai = ((A[0][0] - 1, A[0][1]), (A[1][0], A[1][1] - 1))
        if Ai[0][0] * Ai[1][1] - Ai[0][1] * Ai[1][0] == 0:
            if Ai == ((F0, F0), (F0, F0)):
                degenerate.append(exps)
            else:
                zeros.append(exps)
    return zeros, degenerate


def concrete_zero_set(rule: RuleSpec, fam: Family, M_max: int, reason: str) -> ZeroSet:
    """Exact zeros up to ``M_max`` only, for a family without a closed form."""
    zeros, degenerate = _concrete_zeros(rule, fam, M_max)
    tail = [ClassVerdict("tail", (), "open", reason)] if fam.arity else []
    verdict = TailVerdict.BOUNDED_ONLY if tail or degenerate else TailVerdict.RIGOROUS_NONZERO
    return ZeroSet(fam, sorted(set(zeros)), verdict, tail, degenerate)


def solve_zeros(rule: RuleSpec, cond: DetCondition, M_max: int = 64) -> ZeroSet:
    fam = cond.family
    zeros, degenerate = _concrete_zeros(rule, fam, M_max)
    classes: list[ClassVerdict] = []

    def tail_1d(det: ExpPoly, Mi: Mat, var: int, fixed: dict[int, int], label: str):
        fx = tuple(sorted(fixed.items()))
        for parity in (0, 1):
            start = _first_in_class(M_max, parity)
            d = det
            for i, val in fixed.items():
                d = d.substitute(i, val)
            d = d.restrict({var: parity})
            kind, detail, extra = _dominance_1d(d, var, start)
            null = None
            if kind == "nonzero" and extra:
                for k in extra:
                    zeros.append(tuple(fixed.get(i, k) for i in range(fam.arity)))
                detail += f"; isolated zeros at {extra}"
            if kind == "zero":
                null = _fixed_null_1d(rule, fam, Mi, var, parity, start, fixed)
                kind = "open" if null is None else "fixed-null"
                detail = "vanishes without a fixed null direction" if null is None else f"null direction {null[0]},{null[1]}"
            classes.append(ClassVerdict(label, (parity,), kind, detail, (var,), fx, null))

    try:
        if fam.arity == 1:
            tail_1d(cond.det, cond.matrix, 0, {}, "m1>M")
        elif fam.arity == 2:
            for var, other in ((0, 1), (1, 0)):
                low = fam.lows[other]
                for val in range(low, M_max + 1):
                    name = NAMES[var]
                    tail_1d(cond.det, cond.matrix, var, {other: val}, f"{name}>M, {NAMES[other]}={val}")
            for p1 in (0, 1):
                for p2 in (0, 1):
                    start = (_first_in_class(M_max, p1), _first_in_class(M_max, p2))
                    d = cond.det.restrict({0: p1, 1: p2})
                    kind, detail = _dominance_2d(d, start)
                    null = None
                    if kind == "zero":
                        null = _fixed_null_2d(cond.matrix, (p1, p2), start)
                        kind = "open" if null is None else "fixed-null"
                        detail = "vanishes without a fixed null direction" if null is None else f"null direction {null[0]},{null[1]}"
                    classes.append(ClassVerdict("m1>M, m2>M", (p1, p2), kind, detail, (0, 1), (), null))
    except NoClosedForm as exc:
        classes.append(ClassVerdict("tail", (), "open", str(exc)))

    if degenerate or any(c.kind == "open" for c in classes):
        verdict = TailVerdict.BOUNDED_ONLY
    elif any(c.kind == "fixed-null" for c in classes):
        verdict = TailVerdict.RIGOROUS_FIXED_NULL
    else:
        verdict = TailVerdict.RIGOROUS_NONZERO
    return ZeroSet(fam, sorted(set(zeros)), verdict, classes, degenerate)


# ---------------------------------------------------------------- cycles


def _integer_vector(v: tuple[Fraction, Fraction]) -> tuple[int, int] | None:
    if v[0] == 0 or v[1] == 0:
        return None
    den = v[0].denominator * v[1].denominator // math.gcd(v[0].denominator, v[1].denominator)
    a, b = int(v[0] * den), int(v[1] * den)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0:
        a, b = -a, -b
    return a, b


def _run(rule: RuleSpec, seed: tuple[int, int], n: int) -> list[int]:
    vals = [seed[0], seed[1]]
    for _ in range(n):
        vals.append(step(rule, (vals[-2], vals[-1])))
    return vals


def extract_cycles(rule: RuleSpec, zero_set: ZeroSet) -> list[Cycle]:
    """Integer cycles at the concrete zeros, each confirmed by stepping."""
    fam = zero_set.family
    found = set()
    for exps in zero_set.zeros:
        seq = fam.instance(exps)
        A = concrete_cycle_matrix(rule, seq)
        Ai = ((A[0][0] - 1, A[0][1]), (A[1][0], A[1][1] - 1))
        v = _null_vector(Ai)
        if v is None:
            continue
        seed = _integer_vector(v)
        if seed is None:
            continue  # axis directions are handled with the degenerate seeds
        L = len(seq)
        vals = _run(rule, seed, L)
        if (vals[L], vals[L + 1]) == seed:
            found.add(Cycle.of(vals[:L]))
    return sorted(found, key=lambda c: (len(c), c.values))


def _cycle_through(rule: RuleSpec, seed: tuple[int, int], max_steps: int = 10_000) -> Cycle | None:
    res = simulate(rule, seed, max_steps=max_steps, max_mag=10**9)
    if isinstance(res.outcome, CycleReached):
        vals = res.outcome.cycle.values
        n = len(vals)
        pairs = {(vals[i], vals[(i + 1) % n]) for i in range(n)}
        if seed in pairs:
            return res.outcome.cycle
    return None


def axis_cases(rule: RuleSpec, max_steps: int = 10_000) -> list[Cycle]:
    """Cycles reached from the axis and unit seeds left out of the families."""
    out = set()
    for seed in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
        res = simulate(rule, seed, max_steps=max_steps, max_mag=10**9)
        if isinstance(res.outcome, CycleReached):
            out.add(res.outcome.cycle)
    return sorted(out, key=lambda c: (len(c), c.values))


@dataclass(frozen=True)
class CycleList:
    cycles: tuple[Cycle, ...]
    complete: bool  # every tail class was settled rigorously
    notes: tuple[str, ...] = ()

    def __iter__(self):
        return iter(self.cycles)

    def __len__(self):
        return len(self.cycles)


def collect_cycles(rule: RuleSpec, zero_sets: list[ZeroSet]) -> CycleList:
    found = set(axis_cases(rule))
    for zs in zero_sets:
        found.update(extract_cycles(rule, zs))
    found |= {c.negated() for c in found}
    found = {c for c in found if _verified(rule, c)}
    complete = all(zs.verdict != TailVerdict.BOUNDED_ONLY for zs in zero_sets)
    notes = tuple(
        f"{zs.family.human()}: {c.region} {c.parities} {c.detail}"
        for zs in zero_sets
        for c in zs.classes
        if c.kind == "open"
    )
    return CycleList(tuple(sorted(found, key=lambda c: (len(c), c.values))), complete, notes)


def _verified(rule: RuleSpec, c: Cycle) -> bool:
    from .recurrence import verify_cycle

    return verify_cycle(rule, c.values)
