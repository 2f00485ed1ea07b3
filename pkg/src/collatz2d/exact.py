"""Exact rational arithmetic, linear forms and linear feasibility.

Everything here works over :class:`fractions.Fraction`.  Two feasibility
engines live side by side:

* :func:`fm_feasible` decides a general system of strict / non-strict
  linear inequalities by Fourier-Motzkin elimination.
* :class:`Region` is a specialised engine for the homogeneous two-variable
  systems produced by the cycle enumeration.  After fixing ``a = 1`` every
  constraint is a piecewise-linear predicate in ``t = b`` and the feasible
  set is a finite union of intervals, which we track exactly.

The two are cross-checked against each other in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

Rat = Fraction

__all__ = [
    "Rat",
    "rat",
    "fmt_rat",
    "LinForm",
    "Constraint",
    "IneqSystem",
    "UndeclaredSymbol",
    "fm_feasible",
    "AbsSum",
    "abs_expand",
    "abs_branches",
    "abs_leq_holds",
    "Interval",
    "Region",
]


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def fmt_rat(x: Fraction) -> str:
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- linear forms


@dataclass(frozen=True)
class LinForm:
    """A linear form ``sum(c_s * s) + const`` with zero coefficients dropped."""

    coeffs: tuple[tuple[str, Fraction], ...] = ()
    const: Fraction = Fraction(0)

    def __post_init__(self):
        clean = {}
        for s, c in self.coeffs:
            c = rat(c)
            if c:
                clean[s] = clean.get(s, Fraction(0)) + c
        items = tuple(sorted((s, c) for s, c in clean.items() if c))
        object.__setattr__(self, "coeffs", items)
        object.__setattr__(self, "const", rat(self.const))

    @classmethod
    def of(cls, mapping: Mapping[str, object] | None = None, const=0) -> "LinForm":
        return cls(tuple((mapping or {}).items()), rat(const))

    @classmethod
    def var(cls, name: str, coeff=1) -> "LinForm":
        return cls(((name, rat(coeff)),))

    def coeff(self, sym: str) -> Fraction:
        for s, c in self.coeffs:
            if s == sym:
                return c
        return Fraction(0)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs and not self.const

    def __add__(self, other: "LinForm") -> "LinForm":
        return LinForm(self.coeffs + other.coeffs, self.const + other.const)

    def __neg__(self) -> "LinForm":
        return LinForm(tuple((s, -c) for s, c in self.coeffs), -self.const)

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + (-other)

    def __mul__(self, k) -> "LinForm":
        k = rat(k)
        return LinForm(tuple((s, c * k) for s, c in self.coeffs), self.const * k)

    __rmul__ = __mul__

    def evaluate(self, env: Mapping[str, object]) -> Fraction:
        total = self.const
        for s, c in self.coeffs:
            total += c * rat(env[s])
        return total

    def __str__(self) -> str:
        parts = []
        for s, c in self.coeffs:
            if c == 1:
                parts.append(f"+{s}")
            elif c == -1:
                parts.append(f"-{s}")
            else:
                sign = "+" if c > 0 else "-"
                parts.append(f"{sign}{fmt_rat(abs(c))}{s}")
        if self.const or not parts:
            sign = "+" if self.const >= 0 else "-"
            parts.append(f"{sign}{fmt_rat(abs(self.const))}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


# ---------------------------------------------------------------- systems


class UndeclaredSymbol(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    """``form < 0`` when strict, else ``form <= 0``."""

    form: LinForm
    strict: bool = False

    def holds(self, env: Mapping[str, object]) -> bool:
        val = self.form.evaluate(env)
        return val < 0 if self.strict else val <= 0


@dataclass(frozen=True)
class IneqSystem:
    constraints: tuple[Constraint, ...]
    variables: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "variables", tuple(self.variables))
        declared = set(self.variables)
        for con in self.constraints:
            extra = set(con.form.symbols()) - declared
            if extra:
                raise UndeclaredSymbol(f"undeclared symbols {sorted(extra)} in {con.form}")

    def __add__(self, other: "IneqSystem") -> "IneqSystem":
        variables = list(self.variables)
        for v in other.variables:
            if v not in variables:
                variables.append(v)
        return IneqSystem(self.constraints + other.constraints, tuple(variables))

    def holds(self, env: Mapping[str, object]) -> bool:
        return all(c.holds(env) for c in self.constraints)


# Internal row: (coefficient tuple aligned with variables, const, strict).
_Row = tuple[tuple[Fraction, ...], Fraction, bool]


def _normalise(row: _Row) -> _Row:
    coefs, const, strict = row
    scale = max((abs(c) for c in coefs), default=Fraction(0))
    if not scale:
        scale = abs(const) or Fraction(1)
    return tuple(c / scale for c in coefs), const / scale, strict


def fm_feasible(system: IneqSystem) -> bool:
    """Decide real feasibility of ``system`` exactly.

    Variables are eliminated one at a time, always picking the one that
    creates the fewest combined rows.  Strictness propagates: a combination
    is strict if either parent is.
    """
    nv = len(system.variables)
    index = {v: i for i, v in enumerate(system.variables)}
    rows: set[_Row] = set()
    for con in system.constraints:
        coefs = [Fraction(0)] * nv
        for s, c in con.form.coeffs:
            coefs[index[s]] = c
        rows.add(_normalise((tuple(coefs), con.form.const, con.strict)))

    live = set(range(nv))
    while True:
        # rows with no live variable are decided right away
        decided = set()
        for row in rows:
            coefs, const, strict = row
            if all(not coefs[i] for i in live):
                if (const >= 0) if strict else (const > 0):
                    return False
                decided.add(row)
        rows -= decided
        if not live or not rows:
            return True
        best = None
        for i in sorted(live):
            pos = sum(1 for r in rows if r[0][i] > 0)
            neg = sum(1 for r in rows if r[0][i] < 0)
            cost = pos * neg - pos - neg
            if best is None or cost < best[0]:
                best = (cost, i)
        k = best[1]
        pos = [r for r in rows if r[0][k] > 0]
        neg = [r for r in rows if r[0][k] < 0]
        keep = {r for r in rows if not r[0][k]}
        for p in pos:
            for n in neg:
                wp, wn = 1 / p[0][k], 1 / -n[0][k]
                coefs = tuple(a * wp + b * wn for a, b in zip(p[0], n[0]))
                coefs = coefs[:k] + (Fraction(0),) + coefs[k + 1:]
                keep.add(_normalise((coefs, p[1] * wp + n[1] * wn, p[2] or n[2])))
        rows = keep
        live.discard(k)


# ---------------------------------------------------------------- abs values


@dataclass(frozen=True)
class AbsSum:
    """``linear + sum(w_i * |f_i|)`` with nonnegative weights."""

    linear: LinForm = LinForm()
    terms: tuple[tuple[Fraction, LinForm], ...] = ()

    def __post_init__(self):
        terms = tuple((rat(w), f) for w, f in self.terms)
        if any(w < 0 for w, _ in terms):
            raise ValueError("absolute-value weights must be nonnegative")
        object.__setattr__(self, "terms", terms)

    def evaluate(self, env: Mapping[str, object]) -> Fraction:
        return self.linear.evaluate(env) + sum(
            (w * abs(f.evaluate(env)) for w, f in self.terms), Fraction(0)
        )

    def substitute(self, signs: Sequence[int]) -> LinForm:
        out = self.linear
        for (w, f), s in zip(self.terms, signs):
            out = out + f * (w * s)
        return out


def _branch_signs(rhs: AbsSum, sign_branch) -> list[int]:
    if isinstance(sign_branch, Mapping):
        try:
            return [int(sign_branch[f]) for _, f in rhs.terms]
        except KeyError as exc:
            raise ValueError(f"sign branch misses the form {exc.args[0]}") from None
    signs = [int(s) for s in sign_branch]
    if len(signs) != len(rhs.terms):
        raise ValueError("sign branch must cover every absolute-value term")
    return signs


def abs_expand(lhs: LinForm, rhs: AbsSum | LinForm, sign_branch=(), variables=None) -> IneqSystem:
    """Linearise ``|lhs| <= rhs`` on one sign branch of the rhs terms.

    Returns ``lhs - rhs' <= 0``, ``-lhs - rhs' <= 0`` and one sign constraint
    ``s_i * f_i >= 0`` per absolute-value term.
    """
    if isinstance(rhs, LinForm):
        rhs = AbsSum(rhs)
    signs = _branch_signs(rhs, sign_branch)
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    sub = rhs.substitute(signs)
    cons = [Constraint(lhs - sub), Constraint(-lhs - sub)]
    cons += [Constraint(f * (-s)) for (_, f), s in zip(rhs.terms, signs)]
    if variables is None:
        seen: list[str] = []
        for c in cons:
            for s in c.form.symbols():
                if s not in seen:
                    seen.append(s)
        variables = tuple(sorted(seen))
    return IneqSystem(tuple(cons), tuple(variables))


def abs_branches(lhs: LinForm, rhs: AbsSum | LinForm, variables=None) -> Iterator[IneqSystem]:
    """All sign branches of :func:`abs_expand`; their union is the inequality."""
    if isinstance(rhs, LinForm):
        rhs = AbsSum(rhs)
    for signs in itertools.product((1, -1), repeat=len(rhs.terms)):
        yield abs_expand(lhs, rhs, signs, variables)


def abs_leq_holds(lhs: LinForm, rhs: AbsSum | LinForm, env) -> bool:
    if isinstance(rhs, LinForm):
        rhs = AbsSum(rhs)
    return abs(lhs.evaluate(env)) <= rhs.evaluate(env)


# ---------------------------------------------------------------- 1-D regions

# A linear function of t is a pair (p, q) meaning p + q*t.
Lin = tuple[Fraction, Fraction]


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction | None  # None is +infinity
    lo_closed: bool = False
    hi_closed: bool = False

    def contains(self, t: Fraction) -> bool:
        if t < self.lo or (t == self.lo and not self.lo_closed):
            return False
        if self.hi is None:
            return True
        return t < self.hi or (t == self.hi and self.hi_closed)

    def is_point(self) -> bool:
        return self.hi is not None and self.lo == self.hi


def linear_root(f: Lin) -> Fraction | None:
    p, q = f
    return None if not q else -p / q


@dataclass(frozen=True)
class Region:
    """A finite union of disjoint intervals of ``t`` on ``(0, inf)``."""

    intervals: tuple[Interval, ...] = field(default_factory=tuple)

    @classmethod
    def positive(cls) -> "Region":
        return cls((Interval(Fraction(0), None, False, False),))

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def contains(self, t) -> bool:
        t = rat(t)
        return any(iv.contains(t) for iv in self.intervals)

    def sample(self) -> Fraction | None:
        """Some rational point of the region, if nonempty."""
        for iv in self.intervals:
            if iv.is_point():
                return iv.lo
            if iv.hi is None:
                return iv.lo + 1
            return (iv.lo + iv.hi) / 2
        return None

    def refine(self, pred: Callable[[Fraction], bool], breaks: Iterable[Fraction]) -> "Region":
        """Intersect with ``{t : pred(t)}``.

        ``pred`` must have constant truth value between consecutive points of
        ``breaks`` (e.g. a predicate built from linear functions whose roots
        are all listed).
        """
        breaks = sorted(set(b for b in breaks if b is not None))
        out: list[Interval] = []
        for iv in self.intervals:
            inner = [b for b in breaks if b > iv.lo and (iv.hi is None or b < iv.hi)]
            pts = [iv.lo] + inner + ([] if iv.hi is None else [iv.hi])
            pieces: list[tuple[Fraction, Fraction | None, bool, bool, bool]] = []
            # (lo, hi, lo_closed, hi_closed, member) with point pieces lo == hi
            if iv.is_point():
                if pred(iv.lo):
                    out.append(iv)
                continue
            n_inner = len(inner)
            for j, lo in enumerate(pts):
                if j == 0:
                    closed_pt = iv.lo_closed
                elif j <= n_inner:
                    closed_pt = True
                else:
                    closed_pt = iv.hi_closed
                if closed_pt:
                    pieces.append((lo, lo, True, True, pred(lo)))
                if j + 1 < len(pts):
                    hi = pts[j + 1]
                    mid = (lo + hi) / 2
                elif iv.hi is None:
                    hi = None
                    mid = lo + 1
                else:
                    break
                pieces.append((lo, hi, False, False, pred(mid)))
            out.extend(_merge_pieces(pieces))
        return Region(tuple(out))

    def intersect(self, other: "Region") -> "Region":
        ends = []
        for iv in other.intervals:
            ends.append(iv.lo)
            if iv.hi is not None:
                ends.append(iv.hi)
        return self.refine(other.contains, ends)

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        parts = []
        for iv in self.intervals:
            if iv.is_point():
                parts.append("{" + fmt_rat(iv.lo) + "}")
                continue
            hi = "inf" if iv.hi is None else fmt_rat(iv.hi)
            parts.append(
                ("[" if iv.lo_closed else "(") + fmt_rat(iv.lo) + ", " + hi + ("]" if iv.hi_closed else ")")
            )
        return " u ".join(parts)


def _merge_pieces(pieces) -> list[Interval]:
    out: list[Interval] = []
    cur = None  # [lo, hi, lo_closed, hi_closed]
    for lo, hi, loc, hic, member in pieces:
        if not member:
            if cur is not None:
                out.append(Interval(cur[0], cur[1], cur[2], cur[3]))
                cur = None
            continue
        if cur is None:
            cur = [lo, hi, loc, hic]
        else:
            cur[1], cur[3] = hi, hic
    if cur is not None:
        out.append(Interval(cur[0], cur[1], cur[2], cur[3]))
    return out
