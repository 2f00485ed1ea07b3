"""Parametric families of parity sequences.

A family is ``prefix . B1^m1 . mid . B2^m2 . suffix`` (at most two blocks,
``m_i >= low_i``).  Families are mined from the prefix-closed feasible sets
by folding their trie into a small deterministic automaton.  Two trie nodes
are merged when their subtrees agree up to the depth the data can show
(k-tails merging).  The automaton's simple cycles are the blocks, and every
accepting path through at most two of them is one family.  Because the
automaton is deterministic, every sequence it accepts has exactly one parse.

For each family we also record which one-symbol extensions stay inside the
automaton.  The others are the completeness obligations: appending them must
always be infeasible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .parity import allowed_next, to_program, wrap_valid

__all__ = [
    "Family",
    "MiningFailed",
    "CoverError",
    "mine",
    "mine_candidates",
    "verify_cover",
    "cover_witness",
    "instances",
    "parse",
    "cycle_families",
    "Obligation",
    "obligations",
    "Completeness",
    "ObligationResult",
    "CompletenessReport",
    "completeness_check",
    "relaxed_infeasible",
]


class MiningFailed(Exception):
    pass


class CoverError(AssertionError):
    pass


@dataclass(frozen=True)
class Family:
    prefix: str
    blocks: tuple[tuple[str, int], ...]  # (block, low)
    mids: tuple[str, ...]  # literals between consecutive blocks
    suffix: str
    eps: int
    exits: str = field(default="", compare=False)  # extensions that stay in the family set

    def __post_init__(self):
        if len(self.blocks) > 2:
            raise ValueError("at most two blocks")
        if len(self.mids) != max(len(self.blocks) - 1, 0):
            raise ValueError("one literal between consecutive blocks")
        if any(not b for b, _ in self.blocks):
            raise ValueError("blocks are nonempty")

    @property
    def arity(self) -> int:
        return len(self.blocks)

    @property
    def lows(self) -> tuple[int, ...]:
        return tuple(low for _, low in self.blocks)

    def pieces(self, exps: tuple[int, ...]) -> Iterator[tuple[str, int | None]]:
        """(literal, None) and (block, exponent) pieces in order."""
        yield self.prefix, None
        for i, (b, _) in enumerate(self.blocks):
            yield b, exps[i]
            if i < len(self.mids):
                yield self.mids[i], None
        yield self.suffix, None

    def instance(self, exps: tuple[int, ...]) -> str:
        exps = tuple(exps)
        if len(exps) != self.arity or any(m < low for m, low in zip(exps, self.lows)):
            raise ValueError(f"exponents {exps} outside the domain of {self}")
        return "".join(s if m is None else s * m for s, m in self.pieces(exps))

    def length(self, exps: tuple[int, ...]) -> int:
        return sum(len(s) if m is None else len(s) * m for s, m in self.pieces(exps))

    def fixed_length(self) -> int:
        return len(self.prefix) + sum(len(m) for m in self.mids) + len(self.suffix)

    def exponent_tuples(self, max_len: int) -> Iterator[tuple[int, ...]]:
        """All exponent tuples whose instance has length <= max_len."""
        base = self.length(self.lows)

        def rec(i, acc, used):
            if i == self.arity:
                yield tuple(acc)
                return
            b, low = self.blocks[i]
            m = low
            while used + (m - low) * len(b) <= max_len:
                yield from rec(i + 1, acc + [m], used + (m - low) * len(b))
                m += 1

        if base <= max_len:
            yield from rec(0, [], base)

    def human(self) -> str:
        names = ["m1", "m2"]
        out = [self.prefix]
        for i, (b, low) in enumerate(self.blocks):
            core = b if len(b) == 1 else f"({b})"
            out.append(f"{core}^{{{names[i]}}}")
            if i < len(self.mids):
                out.append(self.mids[i])
        out.append(self.suffix)
        return "".join(out)

    def domain(self) -> str:
        names = ["m1", "m2"]
        return ", ".join(f"{names[i]}>={low}" for i, (_, low) in enumerate(self.blocks))

    def program(self) -> str:
        """Serialisation in the 1/2 alphabet."""
        parts = [to_program(self.prefix)]
        for i, (b, low) in enumerate(self.blocks):
            parts.append(f"[{to_program(b)}]^{low}")
            if i < len(self.mids):
                parts.append(to_program(self.mids[i]))
        parts.append(to_program(self.suffix))
        return "|".join(parts) + f"|{'+' if self.eps > 0 else '-'}"

    @classmethod
    def from_program(cls, text: str, exits: str = "") -> "Family":
        from .parity import from_program

        parts = text.split("|")
        eps = 1 if parts[-1] == "+" else -1
        body = parts[:-1]
        prefix = from_program(body[0])
        blocks, mids = [], []
        rest = body[1:-1]
        for j, p in enumerate(rest):
            if j % 2 == 0:
                core, low = p.split("]^")
                blocks.append((from_program(core[1:]), int(low)))
            else:
                mids.append(from_program(p))
        return cls(prefix, tuple(blocks), tuple(mids), from_program(body[-1]), eps, exits)

    def __str__(self) -> str:
        sign = "+" if self.eps > 0 else "-"
        return f"{self.human()} [{self.domain() or 'fixed'}; eps={sign}]"


# ---------------------------------------------------------------- instances


def instances(families: Iterable[Family], max_len: int, min_len: int = 3) -> dict[int, set[tuple[str, int]]]:
    out: dict[int, set[tuple[str, int]]] = {L: set() for L in range(min_len, max_len + 1)}
    for fam in families:
        for exps in fam.exponent_tuples(max_len):
            s = fam.instance(exps)
            if len(s) >= min_len:
                out[len(s)].add((s, fam.eps))
    return out


def parse(seq: str, eps: int, families: list[Family]) -> tuple[int, tuple[int, ...]] | None:
    """(family index, exponents) of the first family producing ``seq``."""
    for idx, fam in enumerate(families):
        if fam.eps != eps:
            continue
        for exps in fam.exponent_tuples(len(seq)):
            if fam.length(exps) == len(seq) and fam.instance(exps) == seq:
                return idx, exps
    return None


def cover_witness(families: list[Family], sets: dict[int, Iterable[tuple[str, int]]]):
    """First mismatch between family instances and the sets, else None."""
    if not sets:
        return None
    lo, hi = min(sets), max(sets)
    inst = instances(families, hi, lo)
    for L in sorted(sets):
        want = set(sets[L])
        got = inst.get(L, set())
        for x in sorted(want - got):
            return ("uncovered", L, x)
        for x in sorted(got - want):
            return ("spurious", L, x)
    return None


def verify_cover(families: list[Family], sets, raise_on_fail: bool = False) -> bool:
    w = cover_witness(families, sets)
    if w is not None and raise_on_fail:
        raise CoverError(f"{w[0]} sequence of length {w[1]}: {w[2]}")
    return w is None


def cycle_families(families: list[Family]) -> list[Family]:
    """Families whose instances close up cyclically (no even-even wrap).

    A family whose wrap validity changes with its exponents is split first;
    this only happens through exponents at their lower bound of zero.
    """
    out = []
    for fam in families:
        for part in _split_zero(fam):
            probe = part.instance(part.lows)
            if wrap_valid(probe):
                out.append(part)
    return out


def _split_zero(fam: Family) -> list[Family]:
    for i, (b, low) in enumerate(fam.blocks):
        if low == 0:
            lifted = list(fam.blocks)
            lifted[i] = (b, 1)
            one = Family(fam.prefix, tuple(lifted), fam.mids, fam.suffix, fam.eps, fam.exits)
            zero = _drop_block(fam, i)
            return _split_zero(one) + _split_zero(zero)
    return [fam]


def _drop_block(fam: Family, i: int) -> Family:
    lits = [fam.prefix, *fam.mids, fam.suffix]
    merged = lits[: i] + [lits[i] + lits[i + 1]] + lits[i + 2:]
    blocks = fam.blocks[:i] + fam.blocks[i + 1:]
    if not blocks:
        return Family(merged[0], (), (), "", fam.eps, fam.exits)
    return Family(merged[0], blocks, tuple(merged[1:-1]), merged[-1], fam.eps, fam.exits)


# ---------------------------------------------------------------- mining


@dataclass
class _Trie:
    children: list[dict[str, int]]
    depth: list[int]
    label: list[str]  # full string of each node

    @classmethod
    def build(cls, seqs: Iterable[str]) -> "_Trie":
        t = cls([{}], [0], [""])
        for s in sorted(seqs):
            node = 0
            for ch in s:
                nxt = t.children[node].get(ch)
                if nxt is None:
                    nxt = len(t.depth)
                    t.children[node][ch] = nxt
                    t.children.append({})
                    t.depth.append(t.depth[node] + 1)
                    t.label.append(t.label[node] + ch)
                node = nxt
        return t

    def tails(self, node: int, h: int) -> frozenset[str]:
        out = []
        stack = [(node, "")]
        while stack:
            n, w = stack.pop()
            out.append(w)
            if len(w) < h:
                for ch, c in self.children[n].items():
                    stack.append((c, w + ch))
        return frozenset(out)


@dataclass
class _Dfa:
    states: list[int]  # trie node of each state
    delta: dict[tuple[int, str], int]
    accepting: set[int]


def _fold(trie: _Trie, max_len: int, k: int, min_depth: int = 3) -> _Dfa | None:
    red: list[int] = [0]
    state_of = {0: 0}
    delta: dict[tuple[int, str], int] = {}
    queue = [0]
    tail_cache: dict[tuple[int, int], frozenset[str]] = {}

    def tails(n, h):
        key = (n, h)
        if key not in tail_cache:
            tail_cache[key] = trie.tails(n, h)
        return tail_cache[key]

    while queue:
        r = queue.pop(0)
        for ch in sorted(trie.children[r]):
            c = trie.children[r][ch]
            d = trie.depth[c]
            h = max_len - d
            target = None
            if d >= min_depth and h >= k:
                sig = tails(c, h)
                for q in red:
                    if trie.depth[q] >= min_depth and tails(q, h) == sig:
                        target = q
                        break
            if target is None:
                if trie.children[c] and h < k:
                    return None  # a branch runs out of data before folding
                red.append(c)
                state_of[c] = len(red) - 1
                queue.append(c)
                target = c
            delta[(state_of[r], ch)] = state_of[target]
    accepting = {i for i, n in enumerate(red) if trie.depth[n] >= min_depth}
    return _Dfa(red, delta, accepting)


def _sccs(n: int, delta) -> list[list[int]]:
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for (q, _), r in sorted(delta.items()):
        adj[q].append(r)
    index, low, on, stack, out = {}, {}, set(), [], []
    counter = itertools.count()

    def visit(v):
        index[v] = low[v] = next(counter)
        stack.append(v)
        on.add(v)
        for w in adj[v]:
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on.discard(w)
                comp.append(w)
                if w == v:
                    break
            out.append(sorted(comp))

    for v in range(n):
        if v not in index:
            visit(v)
    return out


def _families_of(dfa: _Dfa, eps: int) -> list[Family]:
    n = len(dfa.states)
    comp_of = {}
    cyclic = set()
    for ci, comp in enumerate(_sccs(n, dfa.delta)):
        for v in comp:
            comp_of[v] = ci
        inside = [(q, ch, r) for (q, ch), r in dfa.delta.items() if q in comp and r in comp]
        if len(comp) > 1 or inside:
            out_deg = {v: sum(1 for q, _, _ in inside if q == v) for v in comp}
            if any(d != 1 for d in out_deg.values()):
                raise MiningFailed("nested repetition in the folded automaton")
            cyclic.add(ci)

    def edges(q):
        return [(ch, dfa.delta[(q, ch)]) for ch in "01" if (q, ch) in dfa.delta]

    def exits_of(q):
        return "".join(ch for ch, _ in edges(q))

    found: list[tuple[list, int]] = []

    def walk(q, pattern, nblocks):
        ci = comp_of[q]
        if ci in cyclic:
            if nblocks == 2:
                raise MiningFailed("more than two repeated blocks on one path")
            cycle_states, labels = [q], []
            cur = q
            while True:
                ch, nxt = next((ch, r) for ch, r in edges(cur) if comp_of[r] == ci)
                labels.append(ch)
                if nxt == q:
                    break
                cycle_states.append(nxt)
                cur = nxt
            block = "".join(labels)
            for j, x in enumerate(cycle_states):
                pat = pattern + [("B", block), ("L", block[:j])]
                if x in dfa.accepting:
                    found.append((pat, x))
                for ch, y in edges(x):
                    if comp_of[y] != ci:
                        walk(y, pat + [("L", ch)], nblocks + 1)
            return
        if q in dfa.accepting:
            found.append((pattern, q))
        for ch, y in edges(q):
            walk(y, pattern + [("L", ch)], nblocks)

    walk(0, [], 0)
    fams = [_canonical(pat, eps, exits_of(q)) for pat, q in found]
    return sorted(fams, key=_family_key)


def _canonical(pattern, eps: int, exits: str) -> Family:
    lits = [""]
    blocks: list[list] = []
    for kind, s in pattern:
        if kind == "L":
            lits[-1] += s
        else:
            blocks.append([s, 0])
            lits.append("")
    for i, blk in enumerate(blocks):
        b = blk[0]
        while lits[i].endswith(b) and len(lits[i]) >= len(b):
            lits[i] = lits[i][: len(lits[i]) - len(b)]
            blk[1] += 1
        while lits[i + 1].startswith(b):
            lits[i + 1] = lits[i + 1][len(b):]
            blk[1] += 1
    if not blocks:
        return Family(lits[0], (), (), "", eps, exits)
    return Family(lits[0], tuple((b, low) for b, low in blocks), tuple(lits[1:-1]), lits[-1], eps, exits)


def _family_key(f: Family):
    return (-f.arity, f.prefix, f.blocks, f.mids, f.suffix, -f.eps)


def mine_candidates(sets: dict[int, Iterable[tuple[str, int]]], ks=range(2, 10)) -> Iterator[tuple[int, list[Family]]]:
    """Family lists with exact cover, from the most to the least eager folding."""
    if not sets:
        return
    max_len = max(sets)
    by_eps: dict[int, set[str]] = {}
    for L, xs in sets.items():
        for s, eps in xs:
            by_eps.setdefault(eps, set()).add(s)
    tries = {eps: _Trie.build(seqs) for eps, seqs in by_eps.items()}
    seen = set()
    for k in ks:
        fams: list[Family] = []
        ok = True
        for eps in sorted(by_eps, reverse=True):
            dfa = _fold(tries[eps], max_len, k)
            if dfa is None:
                ok = False
                break
            try:
                fams.extend(_families_of(dfa, eps))
            except MiningFailed:
                ok = False
                break
        if not ok:
            continue
        fams.sort(key=_family_key)
        key = tuple(fams)
        if key in seen:
            continue
        seen.add(key)
        if verify_cover(fams, sets):
            yield k, fams


def mine(sets: dict[int, Iterable[tuple[str, int]]]) -> list[Family]:
    """The family list of the most eager folding with exact cover."""
    if sets and max(sets) < 12:
        raise ValueError("mining needs data up to length 12 at least")
    for _, fams in mine_candidates(sets):
        return fams
    if not any(sets.values()):
        return []
    raise MiningFailed("no folding with at most two blocks per family covers the data")


# ---------------------------------------------------------------- obligations


@dataclass(frozen=True)
class Obligation:
    family: Family
    symbol: str

    def __str__(self) -> str:
        return f"{self.family.human()} + {self.symbol}"


def obligations(families: list[Family]) -> list[Obligation]:
    """One-symbol extensions that leave the family set.

    The symbol must be allowed by the parity graph after the family's last
    two entries, which are fixed once every exponent is at least two.
    """
    out = []
    for fam in families:
        probe = fam.instance(tuple(max(low, 2) for low in fam.lows))
        for ch in allowed_next(probe[-2], probe[-1]):
            if ch not in fam.exits:
                out.append(Obligation(fam, ch))
    return out


# ---------------------------------------------------------------- completeness


class Completeness:
    SYMBOLIC_RULED_OUT = "SYMBOLIC_RULED_OUT"  # discharged for every exponent
    BOUNDED = "BOUNDED"  # discharged up to M_max only
    FAILED = "FAILED"  # some extension is feasible: the family list is wrong


@dataclass(frozen=True)
class ObligationResult:
    obligation: Obligation
    status: str
    checked_up_to: int
    tail_classes: int = 0
    open_classes: tuple[str, ...] = ()
    witness: tuple[int, ...] | None = None  # exponents of a feasible extension


@dataclass(frozen=True)
class CompletenessReport:
    status: str
    M_max: int
    results: tuple[ObligationResult, ...]

    def failures(self) -> list[ObligationResult]:
        return [r for r in self.results if r.status == Completeness.FAILED]


def _sline(f) -> tuple:
    """Form p*a + q*b on the segment a = 1 - s, b = s, as (alpha, beta)."""
    p, q = f
    return (p, q - p)


def relaxed_infeasible(start, window, deltas, coeffs) -> bool:
    """No point of ``0 < s < 1`` meets the relaxed window constraints.

    ``start`` is ``(x(-1), x(0), x(1))`` and ``window`` a run of
    consecutive later entries, with ``a = 1 - s`` and ``b = s``.  Entry
    ``i`` is only known up to ``dp*a + dq*b`` where ``deltas[i] = (dp, dq)``
    bound the errors of its two coefficients.  Strict inequalities are
    relaxed to non-strict ones, so ``True`` proves the exact system
    infeasible for every perturbation within the deltas.
    """
    f0, f1, X = start
    raw = [_sline(f) for f in (f0, f1, X, *window)]
    zero = (Fraction(0), Fraction(0))
    raw_err = [zero] * 3 + [(Fraction(dp), Fraction(dq) - Fraction(dp)) for dp, dq in deltas]
    # one common scale turns everything into integers
    d = math.lcm(Fraction(coeffs.c1).denominator, Fraction(coeffs.c2).denominator)
    n1, n2 = int(coeffs.c1 * d), int(coeffs.c2 * d)
    D = 1
    for a, b in raw + raw_err:
        D = math.lcm(D, a.denominator, b.denominator)
    lines = [(int(a * D), int(b * D)) for a, b in raw]
    errs = [(int(a * D), int(b * D)) for a, b in raw_err]
    iX = 2
    # v = sum(w * |line|) - sum(w' * err) <= 0, stored as (abs terms, err terms)
    cons = [
        ([(1, 0), (-1, iX)], []),
        ([(1, 1), (-1, iX)], []),
        ([(d, iX), (-n1, 0), (-n2, 1)], []),
        ([(d, iX), (-n1, 1), (-n2, iX)], []),
    ]
    for j in range(len(window)):
        idx = 3 + j
        cons.append(([(1, idx), (-1, iX)], [(1, idx)]))
        if j > 0:
            cons.append(([(d, iX), (-n1, idx - 1), (-n2, idx)], [(n1, idx - 1), (n2, idx)]))
    lin = []
    for terms, eterms in cons:
        fixed_a = -sum(w * errs[i][0] for w, i in eterms)
        fixed_b = -sum(w * errs[i][1] for w, i in eterms)
        lin.append((terms, fixed_a, fixed_b))
    pts = {Fraction(0), Fraction(1)}
    for a, b in lines:
        if b != 0 and 0 < -a * b < b * b:
            pts.add(Fraction(-a, b))
    pts = sorted(pts)
    for lo, hi in zip(pts, pts[1:]):
        mid = (lo + hi) / 2
        P, Q = mid.numerator, mid.denominator
        sg = [1 if a * Q + b * P >= 0 else -1 for a, b in lines]
        left, right = lo, hi
        ok = True
        for terms, A, B in lin:
            for w, idx in terms:
                a, b = lines[idx]
                k = w * sg[idx]
                A += k * a
                B += k * b
            if B > 0:
                if A * right.denominator + B * right.numerator > 0:
                    right = Fraction(-A, B)
            elif B < 0:
                if A * left.denominator + B * left.numerator > 0:
                    left = Fraction(-A, B)
            elif A > 0:
                ok = False
            if not ok or left > right or right <= 0 or left >= 1:
                ok = False
                break
        if ok:
            return False
    return True


class _Builder:
    def __init__(self, rule, eps):
        from .parity import next_form

        self.rule, self.eps, self._next = rule, eps, next_form
        self.seq: list[str] = []
        self.forms: list = []

    def push(self, ch: str):
        n = len(self.seq)
        if n == 0:
            self.forms.append((Fraction(1), Fraction(0)))
        elif n == 1:
            self.forms.append((Fraction(0), Fraction(self.eps)))
        else:
            self.forms.append(self._next(self.rule, self.forms[-2], self.forms[-1], self.seq[-2], self.seq[-1]))
        self.seq.append(ch)

    def truncate(self, n: int):
        del self.seq[n:]
        del self.forms[n:]

    def extension(self):
        return self._next(self.rule, self.forms[-2], self.forms[-1], self.seq[-2], self.seq[-1])


def _extension_feasible(b: _Builder, coeffs, window: int) -> bool:
    """Exact test of the one-step extension of the built instance."""
    from .parity import SymTraj, feasible_region

    if len(b.seq) < 3:
        return True
    ext = b.extension()
    forms = b.forms + [ext]
    start = (forms[0], forms[1], forms[2])
    tail = forms[max(3, len(forms) - window):]
    if relaxed_infeasible(start, tail, [(0, 0)] * len(tail), coeffs):
        return False
    return bool(feasible_region(SymTraj(b.eps, tuple(forms), "".join(b.seq) + "?"), coeffs))


def _concrete_pass(rule, fam: Family, coeffs, M_max: int, window: int, deadline=None):
    """First exponent tuple (<= M_max) with a feasible extension, else None."""
    b = _Builder(rule, fam.eps)
    pieces = list(fam.pieces(fam.lows))
    exps: list[int] = []

    def rec(i):
        if deadline is not None:
            deadline()
        if i == len(pieces):
            return tuple(exps) if _extension_feasible(b, coeffs, window) else None
        text, m = pieces[i]
        mark = len(b.seq)
        if m is None:
            for ch in text:
                b.push(ch)
            out = rec(i + 1)
            b.truncate(mark)
            return out
        low = m
        for reps in range(M_max + 1):
            if reps >= low:
                exps.append(reps)
                out = rec(i + 1)
                exps.pop()
                if out is not None:
                    b.truncate(mark)
                    return out
            for ch in text:
                b.push(ch)
        b.truncate(mark)
        return None

    return rec(0)


def _limit(e, start: dict[int, int]):
    """(limit, bound on |e - limit|) over the tail class, or None if it grows."""
    lim, delta = Fraction(0), Fraction(0)
    for key, c in e.terms:
        if any(b > 1 for b in key):
            return None
        if all(b == 1 for b in key):
            lim += c
        else:
            mag = abs(c)
            for i, b in enumerate(key):
                if b != 1:
                    mag *= b ** start[i]
            delta += mag
    return lim, delta


def _tail_class(rule, fam: Family, coeffs, exps, parities: dict[int, int], start: dict[int, int], window: int) -> bool:
    from .cycles import NoClosedForm, segment_product
    from .parity import next_form

    syms = [i for i, m in enumerate(exps) if m is None]
    last = max(syms)
    post = -(-window // len(fam.blocks[last][0]))
    if min(start.values()) < 1 + post:
        return False
    try:
        _, hist = segment_product(rule, fam, exps, pred=None, skip_first=True, post=post, record=window)
    except NoClosedForm:
        return False
    eps = fam.eps
    entries = [(hist[0][0][0], hist[0][0][1] * eps)]
    entries += [(St[1][0], St[1][1] * eps) for St in hist]
    window_forms, deltas = [], []
    for p, q in entries:
        lp = _limit(p.restrict(parities), start)
        lq = _limit(q.restrict(parities), start)
        if lp is None or lq is None:
            return False
        window_forms.append((lp[0], lq[0]))
        deltas.append((lp[1], lq[1]))
    probe = fam.instance(tuple(start.get(i, m) for i, m in enumerate(exps)))
    f0, f1 = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(eps))
    X = next_form(rule, f0, f1, probe[0], probe[1])
    return relaxed_infeasible((f0, f1, X), window_forms, deltas, coeffs)


def _tail_regions(fam: Family, M_max: int):
    """(label, exps with None for symbolic, symbolic indices) past M_max."""
    if fam.arity == 1:
        yield "m1>M", (None,), (0,)
    elif fam.arity == 2:
        for m2 in range(fam.lows[1], M_max + 1):
            yield f"m1>M, m2={m2}", (None, m2), (0,)
        for m1 in range(fam.lows[0], M_max + 1):
            yield f"m1={m1}, m2>M", (m1, None), (1,)
        yield "m1>M, m2>M", (None, None), (0, 1)


def completeness_check(families: list[Family], rule, coeffs, M_max: int = 64, window: int = 8, deadline=None) -> CompletenessReport:
    """Discharge every obligation of the family list.

    Each obligation ``phi + x`` claims that no instance of ``phi`` extends
    by one more entry.  Exponents up to ``M_max`` are checked exactly.  Past
    it the exponents are split by parity; in each class the trailing entries
    converge, and a margin argument on the limits shows the window
    constraints stay infeasible.
    """
    results = []
    for ob in obligations(families):
        fam = ob.family
        hit = _concrete_pass(rule, fam, coeffs, M_max, window, deadline)
        if hit is not None:
            results.append(ObligationResult(ob, Completeness.FAILED, M_max, witness=hit))
            continue
        open_classes, n = [], 0
        for label, exps, syms in _tail_regions(fam, M_max):
            for bits in itertools.product((0, 1), repeat=len(syms)):
                if deadline is not None:
                    deadline()
                n += 1
                parities = dict(zip(syms, bits))
                start = {i: (M_max + 1 if (M_max + 1) % 2 == r else M_max + 2) for i, r in parities.items()}
                ok = any(_tail_class(rule, fam, coeffs, exps, parities, start, w) for w in (window, 2 * window))
                if not ok:
                    open_classes.append(f"{label} parity {bits}")
        status = Completeness.BOUNDED if open_classes else Completeness.SYMBOLIC_RULED_OUT
        results.append(ObligationResult(ob, status, M_max, n, tuple(open_classes)))
    if any(r.status == Completeness.FAILED for r in results):
        status = Completeness.FAILED
    elif any(r.status == Completeness.BOUNDED for r in results):
        status = Completeness.BOUNDED
    else:
        status = Completeness.SYMBOLIC_RULED_OUT
    return CompletenessReport(status, M_max, tuple(results))
