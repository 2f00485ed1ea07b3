"""First-order residue-class maps ``n -> a_i*n + b_i`` for ``n = i (mod m)``.

Purely empirical: validation, stepping, and cycle conjectures from
exhaustive seed scans.  Residues are indexed ``0..m-1``.

Text format: the modulus on the first line, then one ``a_i b_i`` pair per
line for ``i = 0..m-1``, each an exact rational such as ``3/2``.  Blank
lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .recurrence import least_rotation

__all__ = [
    "ModMapSpec",
    "validate",
    "mm_step",
    "conjecture_cycles",
    "ConjectureResult",
    "parse_modmap",
    "format_modmap",
    "CLASSICAL",
]

MAX_STEPS = 10_000
MAX_MAG = 10**18


@dataclass(frozen=True)
class ModMapSpec:
    m: int
    rules: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("the modulus must be positive")
        rules = tuple((Fraction(a), Fraction(b)) for a, b in self.rules)
        if len(rules) != self.m:
            raise ValueError(f"expected {self.m} residue rules, got {len(rules)}")
        object.__setattr__(self, "rules", rules)

    def integer_form(self) -> tuple[tuple[int, int, int], ...]:
        """Per residue ``(p, q, d)`` with ``a*n + b = (p*n + q) / d``."""
        out = []
        for a, b in self.rules:
            d = a.denominator * b.denominator
            out.append((int(a * d), int(b * d), d))
        return tuple(out)


CLASSICAL = ModMapSpec(2, ((Fraction(1, 2), Fraction(0)), (Fraction(3, 2), Fraction(1, 2))))


def validate(spec: ModMapSpec) -> bool:
    """``m*a_i`` and ``i*a_i + b_i`` are integers for every residue."""
    for i, (a, b) in enumerate(spec.rules):
        if (spec.m * a).denominator != 1 or (i * a + b).denominator != 1:
            return False
    return True


def mm_step(spec: ModMapSpec, n: int) -> int:
    a, b = spec.rules[n % spec.m]
    v = a * n + b
    if v.denominator != 1:
        raise ValueError(f"map leaves the integers at n={n}; check it with validate()")
    return int(v)


@dataclass
class ConjectureResult:
    cycles: list[tuple[int, ...]]
    reached: dict[tuple[int, ...], int]  # seeds ending in each cycle
    diverged: list[int] = field(default_factory=list)
    undecided: list[int] = field(default_factory=list)

    @property
    def seeds(self) -> int:
        return sum(self.reached.values()) + len(self.diverged) + len(self.undecided)


def _cycle_ok(spec: ModMapSpec, cyc: tuple[int, ...]) -> bool:
    return all(mm_step(spec, cyc[i]) == cyc[(i + 1) % len(cyc)] for i in range(len(cyc)))


def conjecture_cycles(
    spec: ModMapSpec,
    seeds: int | Iterable[int] = 1000,
    max_steps: int = MAX_STEPS,
    max_mag: int = MAX_MAG,
) -> ConjectureResult:
    """Run every seed to an outcome and collect the cycles met.

    An integer ``seeds`` means all ``|n| <= seeds``.  A value already known
    to end in a cycle stops a walk early.
    """
    if not validate(spec):
        raise ValueError("invalid map: it does not send integers to integers")
    if isinstance(seeds, int):
        seeds = range(-seeds, seeds + 1)
    forms = spec.integer_form()
    m = spec.m
    known: dict[int, int] = {}  # value -> cycle index
    cycles: list[tuple[int, ...]] = []
    reached: dict[int, int] = {}
    diverged, undecided = [], []
    for n in seeds:
        if n in known:
            ci = known[n]
            reached[ci] = reached.get(ci, 0) + 1
            continue
        path = [n]
        pos = {n: 0}
        x = n
        outcome = None
        for _ in range(max_steps):
            p, q, d = forms[x % m]
            x = (p * x + q) // d
            ci = known.get(x)
            if ci is not None:
                outcome = ci
                break
            j = pos.get(x)
            if j is not None:
                cyc = tuple(least_rotation(path[j:]))
                cycles.append(cyc)
                outcome = len(cycles) - 1
                break
            if abs(x) > max_mag:
                outcome = "diverged"
                break
            pos[x] = len(path)
            path.append(x)
        if outcome is None:
            undecided.append(n)
        elif outcome == "diverged":
            diverged.append(n)
        else:
            for v in path:
                known[v] = outcome
            reached[outcome] = reached.get(outcome, 0) + 1
    for c in cycles:
        if not _cycle_ok(spec, c):  # pragma: no cover - integer stepping is exact
            raise AssertionError(f"reported cycle {c} does not close")
    order = sorted(range(len(cycles)), key=lambda i: (len(cycles[i]), cycles[i]))
    return ConjectureResult(
        [cycles[i] for i in order],
        {cycles[i]: reached.get(i, 0) for i in order},
        diverged,
        undecided,
    )


def parse_modmap(text: str) -> ModMapSpec:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty map description")
    m = int(lines[0])
    rules = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'a_i b_i', got {ln!r}")
        rules.append((Fraction(parts[0]), Fraction(parts[1])))
    return ModMapSpec(m, tuple(rules))


def format_modmap(spec: ModMapSpec) -> str:
    return "\n".join([str(spec.m)] + [f"{a} {b}" for a, b in spec.rules]) + "\n"
