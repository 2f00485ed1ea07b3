"""The 256 parity-split second-order rules and their exact simulation.

A rule is a sign octuple ``(s1..s8)`` acting on ``u = x(n-1)``, ``v = x(n)``::

    u even, v even  ->  (s1*u + s2*v) / 2
    u odd,  v odd   ->  (s3*u + s4*v) / 2
    u odd,  v even  ->   s5*u + s6*v
    u even, v odd   ->   s7*u + s8*v

Rule ids are the 8 signs written with ``+`` and ``-``, so the classical
Clark-Lewis rule ``x(n+1) = (x(n-1)+x(n))/2`` or ``-x(n-1)+x(n)`` is
``++++-+-+``.

The four-parameter subfamily ``(al, be, ga, de)`` (halve ``al*u + be*v`` when
``u + v`` is even, otherwise ``ga*u + de*v``) embeds as
``(al, be, al, be, ga, de, ga, de)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

__all__ = [
    "RuleSpec",
    "PairState",
    "Cycle",
    "CycleReached",
    "Diverged",
    "Undecided",
    "SimResult",
    "RULE_ALIASES",
    "step",
    "state_of",
    "successors",
    "simulate",
    "normalize",
    "iterate",
    "odd_part",
    "odd_gcd",
    "canonical_cycle",
    "verify_cycle",
    "least_rotation",
    "primitive_seeds",
    "all_rules",
    "CycleCensus",
    "cycle_census",
]

MAX_STEPS = 100_000
MAX_MAG = 10**12


class PairState(str, Enum):
    OO = "OO"
    OE = "OE"
    EO = "EO"
    EE = "EE"

    @property
    def parities(self) -> tuple[int, int]:
        """(p_{n-1}, p_n) with 1 = odd, 0 = even."""
        return (1 if self.value[0] == "O" else 0, 1 if self.value[1] == "O" else 0)

    @classmethod
    def of(cls, p_prev: int, p_cur: int) -> "PairState":
        return cls(("O" if p_prev % 2 else "E") + ("O" if p_cur % 2 else "E"))


REACHABLE = (PairState.OO, PairState.OE, PairState.EO)


@dataclass(frozen=True)
class RuleSpec:
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != 8 or any(s not in (1, -1) for s in signs):
            raise ValueError(f"a rule needs 8 signs in {{-1, +1}}, got {self.signs!r}")
        object.__setattr__(self, "signs", signs)

    # ---- naming
    @property
    def id(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    @classmethod
    def from_id(cls, text: str) -> "RuleSpec":
        text = text.strip().replace("−", "-")
        if not re.fullmatch(r"[+-]{8}", text):
            raise ValueError(f"bad rule id {text!r}: expected 8 characters over '+'/'-'")
        return cls(tuple(1 if c == "+" else -1 for c in text))

    @classmethod
    def from_agkl(cls, al: int, be: int, ga: int, de: int) -> "RuleSpec":
        return cls((al, be, al, be, ga, de, ga, de))

    @classmethod
    def parse(cls, text: str) -> "RuleSpec":
        """Accept an alias, an 8-sign id, or a 4-tuple like ``(-1,1,1,1)``."""
        raw = text.strip()
        if raw.upper() in RULE_ALIASES:
            return RULE_ALIASES[raw.upper()]
        raw = raw.replace("−", "-")
        if re.fullmatch(r"[+-]{8}", raw):
            return cls.from_id(raw)
        nums = re.findall(r"[+-]?\d+", raw)
        if re.fullmatch(r"\(?\s*[+-]?1(\s*,\s*[+-]?1){3}\s*\)?", raw) and len(nums) == 4:
            return cls.from_agkl(*(int(n) for n in nums))
        if re.fullmatch(r"\(?\s*[+-]?1(\s*,\s*[+-]?1){7}\s*\)?", raw) and len(nums) == 8:
            return cls(tuple(int(n) for n in nums))
        raise ValueError(f"unknown rule {text!r}")

    def agkl(self) -> tuple[int, int, int, int] | None:
        s = self.signs
        if s[0:2] == s[2:4] and s[4:6] == s[6:8]:
            return (s[0], s[1], s[4], s[5])
        return None

    def label(self) -> str:
        t = self.agkl()
        return self.id if t is None else f"{self.id} ({','.join(str(x) for x in t)})"

    @property
    def effective_key(self) -> tuple[int, ...]:
        """Signs that matter on primitive trajectories (the EE pair is never met)."""
        return self.signs[2:]

    # ---- branch data: (cu, cv) with x(n+1) = cu*u + cv*v as exact rationals
    def branch(self, state: PairState):
        from fractions import Fraction

        s = self.signs
        if state is PairState.EE:
            return Fraction(s[0], 2), Fraction(s[1], 2)
        if state is PairState.OO:
            return Fraction(s[2], 2), Fraction(s[3], 2)
        if state is PairState.OE:
            return Fraction(s[4]), Fraction(s[5])
        return Fraction(s[6]), Fraction(s[7])


RULE_ALIASES = {
    "CL": RuleSpec.from_agkl(1, 1, -1, 1),
    "E6": RuleSpec.from_agkl(-1, 1, -1, 1),
}


def all_rules() -> list[RuleSpec]:
    """All 256 rules, ordered by id."""
    import itertools

    rules = [RuleSpec(signs) for signs in itertools.product((1, -1), repeat=8)]
    return sorted(rules, key=lambda r: r.id)


def state_of(u: int, v: int) -> PairState:
    return PairState.of(u & 1, v & 1)


def step(rule: RuleSpec, pair: tuple[int, int]) -> int:
    u, v = pair
    s = rule.signs
    if u & 1:
        if v & 1:
            return (s[2] * u + s[3] * v) // 2
        return s[4] * u + s[5] * v
    if v & 1:
        return s[6] * u + s[7] * v
    return (s[0] * u + s[1] * v) // 2


def successors(rule: RuleSpec, state: PairState) -> set[PairState]:
    """Possible next states; the same graph for every rule."""
    if state is PairState.EE:
        raise ValueError("EE is unreachable from a normalized start")
    if state is PairState.OO:
        return {PairState.OO, PairState.OE}
    if state is PairState.OE:
        return {PairState.EO}
    return {PairState.OO}


# ---------------------------------------------------------------- cycles


def odd_part(n: int) -> int:
    n = abs(n)
    if n == 0:
        return 0
    while not n & 1:
        n >>= 1
    return n


def odd_gcd(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = math.gcd(g, x)
    return odd_part(g)


def least_rotation(values: Sequence[int]) -> tuple[int, ...]:
    vals = tuple(values)
    if not vals:
        raise ValueError("empty cycle")
    return min(vals[i:] + vals[:i] for i in range(len(vals)))


def verify_cycle(rule: RuleSpec, values: Sequence[int]) -> bool:
    vals = list(values)
    n = len(vals)
    if n == 0:
        return False
    return all(step(rule, (vals[i], vals[(i + 1) % n])) == vals[(i + 2) % n] for i in range(n))


def _primitive_period(vals: tuple[int, ...]) -> tuple[int, ...]:
    n = len(vals)
    for p in range(1, n + 1):
        if n % p == 0 and vals == vals[:p] * (n // p):
            return vals[:p]
    return vals


@dataclass(frozen=True)
class Cycle:
    values: tuple[int, ...]
    canonical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        if not self.values:
            raise ValueError("a cycle is nonempty")

    @classmethod
    def of(cls, values: Sequence[int]) -> "Cycle":
        """Least rotation of the primitive period, without rescaling."""
        rot = least_rotation(_primitive_period(tuple(values)))
        return cls(rot, canonical=odd_gcd(rot) == 1)

    def __len__(self) -> int:
        return len(self.values)

    def negated(self) -> "Cycle":
        return Cycle.of(tuple(-x for x in self.values))

    def max_abs(self) -> int:
        return max(abs(x) for x in self.values)

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.values) + ")"


def canonical_cycle(values: Sequence[int], rule: RuleSpec | None = None) -> Cycle:
    """Least rotation of the odd-primitive cycle through ``values``.

    When ``rule`` is given the input is verified first.
    """
    vals = tuple(int(x) for x in values)
    if rule is not None and not verify_cycle(rule, vals):
        raise ValueError(f"{vals} is not a cycle of rule {rule.id}")
    g = odd_gcd(vals)
    if g > 1:
        vals = tuple(x // g for x in vals)
    rot = least_rotation(_primitive_period(vals))
    return Cycle(rot, canonical=True)


# ---------------------------------------------------------------- simulation


@dataclass(frozen=True)
class CycleReached:
    cycle: Cycle
    entered_at: int  # index into the trajectory where the cycle starts


@dataclass(frozen=True)
class Diverged:
    at_step: int
    value: int


@dataclass(frozen=True)
class Undecided:
    steps: int


@dataclass(frozen=True)
class SimResult:
    trajectory: list[int]
    outcome: CycleReached | Diverged | Undecided


def iterate(rule: RuleSpec, init: tuple[int, int], n: int) -> list[int]:
    """``x(-1), x(0), ..., x(n)``."""
    vals = [int(init[0]), int(init[1])]
    for _ in range(n):
        vals.append(step(rule, (vals[-2], vals[-1])))
    return vals


def simulate(
    rule: RuleSpec,
    init: tuple[int, int],
    max_steps: int = MAX_STEPS,
    max_mag: int = MAX_MAG,
) -> SimResult:
    if max_steps <= 0 or max_mag <= 0:
        raise ValueError("max_steps and max_mag must be positive")
    u, v = int(init[0]), int(init[1])
    traj = [u, v]
    seen = {(u, v): 0}
    for n in range(max_steps):
        w = step(rule, (u, v))
        traj.append(w)
        if abs(w) > max_mag:
            return SimResult(traj, Diverged(n + 1, w))
        u, v = v, w
        k = len(traj) - 2
        j = seen.get((u, v))
        if j is not None:
            return SimResult(traj, CycleReached(Cycle.of(traj[j:k]), j))
        seen[(u, v)] = k
    return SimResult(traj, Undecided(max_steps))


def normalize(pair: tuple[int, int]) -> tuple[int, int]:
    a, b = int(pair[0]), int(pair[1])
    if a == 0 and b == 0:
        raise ValueError("(0, 0) cannot be normalized")
    g = odd_part(math.gcd(a, b))
    return a // g, b // g


def primitive_seeds(grid: int) -> Iterator[tuple[int, int]]:
    """Seeds with ``|a|, |b| <= grid`` and ``gcd(a, b) = 1``.

    Whenever gcd is one the pair is never both even, and neither is any later
    pair of the trajectory, so the halved even-even branch is never used.
    """
    for a in range(-grid, grid + 1):
        for b in range(-grid, grid + 1):
            if math.gcd(a, b) == 1:
                yield a, b


@dataclass
class CycleCensus:
    """Where the primitive seeds of a grid end up."""

    grid: int
    reached: dict[Cycle, int]  # cycle -> number of seeds ending in it
    escaped: list[tuple[int, int]]  # passed max_mag or max_steps

    @property
    def cycles(self) -> set[Cycle]:
        return set(self.reached)


def cycle_census(
    rule: RuleSpec,
    grid: int = 100,
    max_steps: int = MAX_STEPS,
    max_mag: int = MAX_MAG,
) -> CycleCensus:
    """Simulate every ``primitive_seeds(grid)`` seed to its cycle.

    Pairs already resolved are memoised, so long shared tails are walked once.
    """
    fate: dict[tuple[int, int], Cycle | None] = {}
    reached: dict[Cycle, int] = {}
    escaped = []
    for seed in primitive_seeds(grid):
        path: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        pair = seed
        while True:
            if pair in fate:
                end = fate[pair]
                break
            if pair in index:
                j = index[pair]
                end = Cycle.of([p[0] for p in path[j:]])
                break
            if abs(pair[1]) > max_mag or len(path) >= max_steps:
                end = None
                break
            index[pair] = len(path)
            path.append(pair)
            pair = (pair[1], step(rule, pair))
        for p in path:
            fate[p] = end
        if end is None:
            escaped.append(seed)
        else:
            reached[end] = reached.get(end, 0) + 1
    return CycleCensus(grid, dict(sorted(reached.items(), key=lambda kv: (len(kv[0]), kv[0].values))), escaped)
