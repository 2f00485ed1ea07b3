"""Feasible parity sequences of candidate cycles.

A candidate cycle is rotated so that ``x(1)`` has the largest modulus and
its predecessor ``x(0)`` is strictly smaller (cycles whose entries all share
one modulus are unit cycles, found separately).  With ``x(-1) = a > 0`` and
``x(0) = eps*b``, ``b > 0``, every later entry is a linear form in ``(a, b)``
fixed by the parity choices.  A parity sequence survives when some real
``(a, b)`` satisfies

* ``|x(i)| <= X`` for every entry, with ``X = |x(1)|`` and ``|x(0)| < X``;
* ``X <= c1*|x(k-1)| + c2*|x(k)|`` for every consecutive pair, because the
  proved bound applies from any pair of a cycle and ``x(1)`` recurs.

Sequences are bit strings, ``1`` odd and ``0`` even.  The program alphabet
(``1`` odd, ``2`` even) is used for dumps.

Two facts about the parity graph are used throughout.  Both mixed branches
always produce an odd number, and no two consecutive entries of a primitive
trajectory are even.  So after an ``01`` or ``10`` pair the next entry is
odd, and ``00`` never occurs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .exact import (
    Constraint,
    IneqSystem,
    LinForm,
    Region,
    fm_feasible,
    linear_root,
)
from .prover import BoundCoeffs
from .recurrence import PairState, RuleSpec

__all__ = [
    "ParitySeq",
    "SymTraj",
    "to_program",
    "from_program",
    "allowed_next",
    "valid_sequence",
    "wrap_valid",
    "initial_traj",
    "sym_extend",
    "sym_traj",
    "feasible",
    "feasible_fm",
    "feasible_region",
    "extend_region",
    "enumerate_sequences",
    "cycle_candidates",
    "dump_sets",
]

ParitySeq = str  # over "0" (even) / "1" (odd)

Lin = tuple[Fraction, Fraction]  # p*a + q*b


def to_program(seq: str) -> str:
    return seq.replace("0", "2")


def from_program(text: str) -> str:
    text = "".join(ch for ch in text if ch in "12")
    return text.replace("2", "0")


def allowed_next(p_prev: str, p_cur: str) -> tuple[str, ...]:
    """Parities that may follow the pair ``(p_prev, p_cur)``."""
    if p_prev == "1" and p_cur == "1":
        return ("0", "1")
    if p_prev != p_cur:
        return ("1",)
    return ()


def valid_sequence(seq: str) -> bool:
    if any(ch not in "01" for ch in seq):
        return False
    if seq[:2] == "00":
        return False
    return all(seq[i + 2] in allowed_next(seq[i], seq[i + 1]) for i in range(len(seq) - 2))


def wrap_valid(seq: str) -> bool:
    """Whether ``seq`` read cyclically avoids an even-even pair.

    A cycle of period ``L`` returns to ``(x(-1), x(0))`` through the pair
    ``(x(L-2), x(L-1) = x(-1))``; its branch must exist.
    """
    return len(seq) >= 2 and not (seq[-1] == "0" and seq[0] == "0")


# ---------------------------------------------------------------- trajectories


@dataclass(frozen=True)
class SymTraj:
    eps: int
    forms: tuple[Lin, ...]
    parities: ParitySeq

    def linforms(self) -> list[LinForm]:
        return [LinForm.of({"a": p, "b": q}) for p, q in self.forms]

    def __len__(self) -> int:
        return len(self.forms)


def initial_traj(eps: int, p_first: str, p_second: str) -> SymTraj:
    if eps not in (1, -1):
        raise ValueError("eps is +1 or -1")
    one, zero = Fraction(1), Fraction(0)
    return SymTraj(eps, ((one, zero), (zero, Fraction(eps))), p_first + p_second)


def _branch(rule: RuleSpec, p_prev: str, p_cur: str):
    return rule.branch(PairState.of(int(p_prev), int(p_cur)))


def next_form(rule: RuleSpec, f_prev: Lin, f_cur: Lin, p_prev: str, p_cur: str) -> Lin:
    cu, cv = _branch(rule, p_prev, p_cur)
    return (cu * f_prev[0] + cv * f_cur[0], cu * f_prev[1] + cv * f_cur[1])


def sym_extend(traj: SymTraj, rule: RuleSpec, next_parity: str) -> SymTraj:
    if len(traj.forms) < 2:
        raise ValueError("need two entries to extend")
    par = traj.parities
    w = next_form(rule, traj.forms[-2], traj.forms[-1], par[-2], par[-1])
    return SymTraj(traj.eps, traj.forms + (w,), par + str(next_parity))


def sym_traj(rule: RuleSpec, seq: ParitySeq, eps: int) -> SymTraj:
    traj = initial_traj(eps, seq[0], seq[1])
    for ch in seq[2:]:
        traj = sym_extend(traj, rule, ch)
    return traj


# ---------------------------------------------------------------- region route


def _ev(f: Lin, t: Fraction) -> Fraction:
    return f[0] + f[1] * t


def _roots(*fs: Lin) -> list[Fraction]:
    return [r for r in (linear_root(f) for f in fs) if r is not None]


def _combos(x: Lin, terms: list[tuple[Fraction, Lin]]) -> list[Lin]:
    """Linear pieces of ``|x| - sum(w*|g|)`` over every sign pattern."""
    out = []
    for signs in itertools.product((1, -1), repeat=len(terms) + 1):
        p = signs[0] * x[0] - sum(s * w * g[0] for s, (w, g) in zip(signs[1:], terms))
        q = signs[0] * x[1] - sum(s * w * g[1] for s, (w, g) in zip(signs[1:], terms))
        out.append((p, q))
    return out


def _cap(region: Region, x: Lin, g: Lin, strict: bool) -> Region:
    """Intersect with ``|g| <= |x|`` (``<`` when strict)."""
    breaks = _roots(x, g, *_combos(g, [(Fraction(1), x)]))
    if strict:
        return region.refine(lambda t: abs(_ev(g, t)) < abs(_ev(x, t)), breaks)
    return region.refine(lambda t: abs(_ev(g, t)) <= abs(_ev(x, t)), breaks)


def _pair(region: Region, x: Lin, h: Lin, g: Lin, c: BoundCoeffs) -> Region:
    """Intersect with ``|x| <= c1*|h| + c2*|g|``."""
    c1, c2 = c.c1, c.c2
    breaks = _roots(x, h, g, *_combos(x, [(c1, h), (c2, g)]))
    return region.refine(
        lambda t: abs(_ev(x, t)) <= c1 * abs(_ev(h, t)) + c2 * abs(_ev(g, t)), breaks
    )


def extend_region(region: Region, forms: tuple[Lin, ...], k: int, coeffs: BoundCoeffs) -> Region:
    """Add the constraints contributed by entry ``k`` (0-based, ``k >= 2``)."""
    x = forms[2]
    if k == 2:
        a, b = forms[0], forms[1]
        region = _cap(region, x, a, strict=False)
        region = _cap(region, x, b, strict=True)
        region = _pair(region, x, a, b, coeffs)
        return _pair(region, x, b, x, coeffs)
    g, h = forms[k], forms[k - 1]
    region = _cap(region, x, g, strict=False)
    return _pair(region, x, h, g, coeffs)


def feasible_region(traj: SymTraj, coeffs: BoundCoeffs) -> Region:
    """Set of ``t = b/a`` satisfying every constraint of ``traj``."""
    if len(traj.forms) < 3:
        raise ValueError("feasibility needs at least three entries")
    region = Region.positive()
    for k in range(2, len(traj.forms)):
        region = extend_region(region, traj.forms, k, coeffs)
        if not region:
            break
    return region


def feasible(traj: SymTraj, coeffs: BoundCoeffs, as_cycle: bool = True) -> bool:
    """Exact feasibility of a symbolic candidate.

    ``as_cycle=False`` drops the pair conditions and keeps only the
    max-element convention.
    """
    if as_cycle:
        return bool(feasible_region(traj, coeffs))
    region = Region.positive()
    x = traj.forms[2]
    region = _cap(region, x, traj.forms[1], strict=True)
    for k, g in enumerate(traj.forms):
        if k != 1:
            region = _cap(region, x, g, strict=False)
    return bool(region)


# ---------------------------------------------------------------- FM route


def _lf(f: Lin) -> LinForm:
    return LinForm.of({"a": f[0], "b": f[1]})


def feasible_fm(traj: SymTraj, coeffs: BoundCoeffs, as_cycle: bool = True) -> bool:
    """Same question as :func:`feasible`, decided by Fourier-Motzkin.

    The system lives over ``{a, b, X}``.  ``X = |x(1)|`` splits into two sign
    branches and every pair condition into four (``c1*|h| + c2*|g|`` is the
    maximum of its four signed versions).  Branches are explored depth first
    with pruning, so this is only meant for short sequences.
    """
    if len(traj.forms) < 3:
        raise ValueError("feasibility needs at least three entries")
    X = LinForm.var("X")
    a, b = LinForm.var("a"), LinForm.var("b")
    variables = ("a", "b", "X")
    fs = [_lf(f) for f in traj.forms]
    base = [
        Constraint(LinForm.of(const=1) - a),  # a >= 1
        Constraint(LinForm.of(const=1) - b),  # b >= 1
        Constraint(fs[1] - X, strict=True),
        Constraint(-fs[1] - X, strict=True),
    ]
    for k, f in enumerate(fs):
        if k != 1:
            base += [Constraint(f - X), Constraint(-f - X)]
    choices = []
    if as_cycle:
        for k in range(1, len(fs)):
            h, g = fs[k - 1], fs[k]
            choices.append(
                [
                    Constraint(X - h * (coeffs.c1 * s1) - g * (coeffs.c2 * s2))
                    for s1 in (1, -1)
                    for s2 in (1, -1)
                ]
            )

    def search(cons, depth):
        if not fm_feasible(IneqSystem(tuple(cons), variables)):
            return False
        if depth == len(choices):
            return True
        return any(search(cons + [c], depth + 1) for c in choices[depth])

    for sigma in (1, -1):
        start = base + [Constraint(X - fs[2] * sigma), Constraint(fs[2] * sigma - X)]
        if search(start, 0):
            return True
    return False


# ---------------------------------------------------------------- enumeration


@dataclass
class _Node:
    seq: str
    eps: int
    forms: tuple[Lin, ...]
    region: Region


def _children(rule, node: _Node, coeffs, max_len) -> Iterator[_Node]:
    # the newest entry's form depends only on the two before it, so both
    # children share one constraint set
    forms = node.forms
    k = len(forms)
    if k >= max_len:
        return
    seq = node.seq
    w = next_form(rule, forms[-2], forms[-1], seq[-2], seq[-1])
    forms2 = forms + (w,)
    region = extend_region(node.region, forms2, k, coeffs)
    if not region:
        return
    for ch in allowed_next(seq[-2], seq[-1]):
        yield _Node(seq + ch, node.eps, forms2, region)


def _roots_nodes(rule, coeffs) -> Iterator[_Node]:
    for eps in (1, -1):
        for first, second in (("1", "1"), ("1", "0"), ("0", "1")):
            t = initial_traj(eps, first, second)
            w = next_form(rule, t.forms[0], t.forms[1], first, second)
            forms = t.forms + (w,)
            region = extend_region(Region.positive(), forms, 2, coeffs)
            if not region:
                continue
            for ch in allowed_next(first, second):
                yield _Node(first + second + ch, eps, forms, region)


def enumerate_sequences(
    rule: RuleSpec, coeffs: BoundCoeffs, max_len: int = 24, deadline=None
) -> dict[int, frozenset[tuple[str, int]]]:
    """Every feasible ``(sequence, eps)`` of each length ``3..max_len``.

    The set is prefix closed.  ``deadline`` is an optional zero-argument
    callable raising when time is up.
    """
    if max_len < 3:
        raise ValueError("max_len must be at least 3")
    level = sorted(_roots_nodes(rule, coeffs), key=lambda n: (n.seq, -n.eps))
    out: dict[int, frozenset[tuple[str, int]]] = {}
    length = 3
    while True:
        out[length] = frozenset((n.seq, n.eps) for n in level)
        if length == max_len:
            break
        if deadline is not None:
            deadline()
        nxt = []
        for node in level:
            nxt.extend(_children(rule, node, coeffs, max_len))
        level = sorted(nxt, key=lambda n: (n.seq, -n.eps))
        length += 1
    return out


def cycle_candidates(sets: dict[int, Iterable[tuple[str, int]]]) -> dict[int, frozenset[tuple[str, int]]]:
    """Members that can be read as the period of a cycle."""
    return {L: frozenset(x for x in xs if wrap_valid(x[0])) for L, xs in sets.items()}


def dump_sets(sets: dict[int, Iterable[tuple[str, int]]]) -> str:
    lines = []
    for L in sorted(sets):
        for seq, eps in sorted(sets[L], key=lambda x: (x[0], -x[1])):
            lines.append(f"{to_program(seq)} {'+' if eps > 0 else '-'}")
    return "\n".join(lines) + ("\n" if lines else "")
