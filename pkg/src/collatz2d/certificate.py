"""Theorem certificates: a JSON record of one rule's classification.

A certificate holds everything needed to re-check the result without the
pipeline: the bound and its induction scheme with every derivation, the
mined families and their completeness statuses, the determinant analysis of
each cycle family, and the cycle list.

Schema (version 1), one JSON object with sorted keys.  Rationals are
strings ``"p/q"`` or ``"p"``; parity words use ``0``/``1`` and family
programs the ``1``/``2`` alphabet (``2`` = even).

``rule``, ``agkl``, ``convention``
    rule id (8 signs), its AGKL 4-tuple if it has one, and the sign convention.
``status``, ``detail``
    ``FULL``, ``BOUNDED_ONLY`` (detail: the exponent bound) or ``FAILED``
    (detail: the stage).
``coeffs``, ``conjectured``, ``bound_order``
    proved ``(c1, c2)``, the first surviving candidate, and the candidate order.
``scheme``, ``base``, ``derivations``
    forms per state, base checks ``|p| <= c1, |q| <= c2``, and for every
    transition and target form a combination of source forms.
``failure``, ``witness``
    non-closure report, and a seed whose trajectory passes ``10**6``.
``max_len``, ``sequence_counts``, ``cover_verified``, ``families``
    enumeration depth, feasible sequences per length, and the mined families.
``completeness``
    one entry per extension obligation.
``determinants``
    per cycle family: ``det(M - I)`` as exponential-polynomial terms, exact
    zeros up to ``M_max``, samples, tail classes, verdict.
``axis_cycles``, ``cycles``
    cycles from the unit and axis seeds, and the full canonical cycle list.

:func:`verify` re-derives every claim with its own arithmetic.  It only
shares :mod:`fractions` with the pipeline.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

__all__ = [
    "VERSION",
    "CONVENTION",
    "TheoremCertificate",
    "CertificateError",
    "VerifyReport",
    "build_certificate",
    "emit",
    "parse_certificate",
    "theorem_text",
    "verify",
    "diff",
    "FULL",
    "BOUNDED_ONLY",
    "FAILED",
]

VERSION = 1
CONVENTION = (
    "x(n+1) = (s1*u + s2*v)/2 if u, v even; (s3*u + s4*v)/2 if both odd; "
    "s5*u + s6*v if u odd, v even; s7*u + s8*v if u even, v odd; "
    "u = x(n-1), v = x(n); AGKL (a,b,c,d) = (a,b,a,b,c,d,c,d); "
    "parity words list x(-1), x(0), ...; sign positions fixed by published cycle data"
)
BOUND_ORDER = "least c1+c2, then least c1"

FULL = "FULL"
BOUNDED_ONLY = "BOUNDED_ONLY"
FAILED = "FAILED"

STATES = ("OO", "OE", "EO")
SUCCESSORS = {"OO": ("OO", "OE"), "OE": ("EO",), "EO": ("OO",)}
UNIT_SEEDS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))


class CertificateError(ValueError):
    """Structured parse error: a missing or malformed field."""


def q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def uq(s) -> Fraction:
    if not isinstance(s, str):
        raise CertificateError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise CertificateError(f"bad rational {s!r}") from exc


# ---------------------------------------------------------------- record


@dataclass
class TheoremCertificate:
    rule: str
    status: str
    detail: str = ""
    version: int = VERSION
    convention: str = CONVENTION
    agkl: list[int] | None = None
    bound_order: str = BOUND_ORDER
    coeffs: list[str] | None = None
    conjectured: list[str] | None = None
    scheme: dict[str, list[list[str]]] | None = None
    base: list[dict[str, Any]] = field(default_factory=list)
    derivations: list[dict[str, Any]] = field(default_factory=list)
    failure: dict[str, Any] | None = None
    witness: dict[str, Any] | None = None
    survey_grid: int | None = None
    max_len: int | None = None
    sequence_counts: dict[str, int] = field(default_factory=dict)
    cover_verified: bool = False
    families: list[dict[str, str]] = field(default_factory=list)
    completeness: list[dict[str, Any]] = field(default_factory=list)
    M_max: int | None = None
    determinants: list[dict[str, Any]] = field(default_factory=list)
    axis_cycles: list[list[int]] = field(default_factory=list)
    cycles: list[list[int]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"{self.status}({self.detail})" if self.detail else self.status

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TheoremCertificate":
        if not isinstance(data, dict):
            raise CertificateError("a certificate is a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise CertificateError(f"unknown fields {unknown}")
        for required in ("rule", "status"):
            if required not in data:
                raise CertificateError(f"missing field {required!r}")
        if data.get("version", VERSION) != VERSION:
            raise CertificateError(f"unsupported version {data.get('version')!r}")
        return cls(**data)


def emit(cert: TheoremCertificate) -> tuple[str, str]:
    """``(json_text, theorem_text)``; the JSON is byte-stable."""
    return json.dumps(cert.to_dict(), sort_keys=True, indent=1) + "\n", theorem_text(cert)


def parse_certificate(text: str) -> TheoremCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not JSON: {exc}") from exc
    return TheoremCertificate.from_dict(data)


# ---------------------------------------------------------------- building


def _pair(pq) -> list[str]:
    return [q(pq[0]), q(pq[1])]


def _cycle_list(cycles) -> list[list[int]]:
    return sorted((list(c.values) for c in cycles), key=lambda v: (len(v), v))


def build_certificate(
    rule,
    status: str,
    detail: str = "",
    *,
    bound=None,
    max_len: int | None = None,
    sets=None,
    families=(),
    cover_verified: bool = False,
    completeness=None,
    analyses=(),
    M_max: int | None = None,
    cycles=None,
    axis=(),
    notes=(),
) -> TheoremCertificate:
    """Assemble a certificate from pipeline objects.

    ``bound`` is a ``BoundProof``, ``completeness`` a ``CompletenessReport``,
    ``analyses`` a list of ``(DetCondition or None, ZeroSet)`` and ``cycles``
    a ``CycleList``.
    """
    from .cycles import concrete_cycle_matrix

    ag = rule.agkl()
    cert = TheoremCertificate(rule.id, status, detail, agkl=list(ag) if ag else None, M_max=M_max)
    if bound is not None:
        cert.survey_grid = bound.survey.grid
        if bound.conjectured is not None:
            cert.conjectured = [q(bound.conjectured.c1), q(bound.conjectured.c2)]
        if bound.survey.witness is not None:
            seed, n, v = bound.survey.witness
            cert.witness = {"seed": list(seed), "step": n, "value": str(v)}
        if bound.proof is not None:
            sch = bound.proof.scheme
            cert.coeffs = [q(sch.coeffs.c1), q(sch.coeffs.c2)]
            cert.scheme = {s.value: [_pair(f) for f in fs] for s, fs in sch.forms.items()}
            cert.base = [
                {"state": s.value, "form": _pair(f), "bound": list(cert.coeffs)}
                for s, fs in sch.forms.items()
                for f in fs
            ]
            cert.derivations = [
                {
                    "from": d.state_from.value,
                    "to": d.state_to.value,
                    "source": _pair(d.source),
                    "target": _pair(d.target),
                    "combination": [{"form": _pair(h), "coeff": q(c)} for h, c in d.combination],
                }
                for d in bound.proof.transitions
            ]
        if bound.failure is not None:
            f = bound.failure
            cert.failure = {"reason": f.reason, "state": f.state.value, "obligation": _pair(f.obligation)}
    cert.max_len = max_len
    if sets is not None:
        cert.sequence_counts = {str(L): len(xs) for L, xs in sorted(sets.items())}
    cert.cover_verified = bool(cover_verified)
    cert.families = [{"program": f.program(), "human": f.human(), "exits": f.exits} for f in families]
    if completeness is not None:
        cert.completeness = [
            {
                "family": r.obligation.family.program(),
                "symbol": r.obligation.symbol,
                "status": r.status,
                "checked_up_to": r.checked_up_to,
                "tail_classes": r.tail_classes,
                "open_classes": list(r.open_classes),
            }
            for r in completeness.results
        ]
    for cond, zs in analyses:
        fam = zs.family
        rec: dict[str, Any] = {
            "family": fam.program(),
            "human": fam.human(),
            "nvars": fam.arity,
            "det": None,
            "zeros": [list(z) for z in zs.zeros],
            "degenerate": [list(z) for z in zs.degenerate],
            "verdict": zs.verdict,
            "classes": [
                {
                    "region": c.region,
                    "symbolic": list(c.symbolic),
                    "fixed": [list(x) for x in c.fixed],
                    "parities": list(c.parities),
                    "kind": c.kind,
                    "null": _pair(c.null) if c.null is not None else None,
                    "detail": c.detail,
                }
                for c in zs.classes
            ],
        }
        if cond is not None:
            rec["det"] = [[[q(b) for b in key], q(c)] for key, c in cond.det.terms]
            rec["det_text"] = str(cond.det)
        samples = []
        for exps in _sample_points(fam, M_max or 1):
            A = concrete_cycle_matrix(rule, fam.instance(exps))
            samples.append([list(exps), q((A[0][0] - 1) * (A[1][1] - 1) - A[0][1] * A[1][0])])
        rec["samples"] = samples
        cert.determinants.append(rec)
    if cycles is not None:
        cert.cycles = _cycle_list(cycles)
    cert.axis_cycles = _cycle_list(axis)
    cert.notes = list(notes)
    return cert


def _sample_points(fam, M_max: int) -> list[tuple[int, ...]]:
    if fam.arity == 0:
        return [()]
    lows = fam.lows
    pts = [lows]
    for i in range(fam.arity):
        for k in (1, 2):
            p = list(lows)
            p[i] += k
            if p[i] <= M_max:
                pts.append(tuple(p))
    return sorted(set(pts))


# ---------------------------------------------------------------- theorem text


def _form_text(p: Fraction, qq: Fraction, u: str, v: str) -> str:
    out = []
    for c, name in ((p, u), (qq, v)):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else f"{q(abs(c))}*"
        out.append(("-" if c < 0 else "+", f"{mag}{name}"))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _cycle_text(vals) -> str:
    return "(" + ",".join(str(x) for x in vals) + ")"


CASE_NAMES = {"OO": "I", "OE": "II", "EO": "III"}
PARITY_WORDS = {"OO": ("odd", "odd"), "OE": ("odd", "even"), "EO": ("even", "odd")}


def theorem_text(cert: TheoremCertificate) -> str:
    lines = []
    title = f"Rule {cert.rule}"
    if cert.agkl:
        title += " = AGKL (" + ",".join(str(x) for x in cert.agkl) + ")"
    lines += [title, f"Status: {cert.label}", ""]
    if cert.status == FAILED:
        lines.append(f"No theorem: the pipeline stopped at stage '{cert.detail}'.")
        grid = f" from the seed grid |a|, |b| <= {cert.survey_grid}" if cert.survey_grid else ""
        if cert.witness:
            w = cert.witness
            a, b = w["seed"]
            lines.append(
                f"The trajectory from x(-1) = {a}, x(0) = {b} reaches |x({w['step']})| = {abs(int(w['value']))} > 10^6."
            )
        if cert.detail == "bound-conjecture":
            lines.append(f"No candidate bound |x(n)| <= c1*|x(-1)| + c2*|x(0)| fits the trajectories{grid}.")
            if not cert.witness:
                lines.append("None of them passed 10^6, so the rule is not known to be unbounded.")
        if cert.failure:
            f = cert.failure
            lines.append(
                f"Induction scheme did not close ({f['reason']}): state {f['state']} needs the form "
                f"{_form_text(uq(f['obligation'][0]), uq(f['obligation'][1]), 'u', 'v')}."
            )
        for n in cert.notes:
            lines.append(f"Note: {n}")
        return "\n".join(lines) + "\n"

    c1, c2 = (uq(x) for x in cert.coeffs)
    lines.append("Theorem. Let x(-1), x(0) be integers, not both even, and let x(n) follow the rule.")
    lines.append(f"  (a) |x(n)| <= {q(c1)}*|x(-1)| + {q(c2)}*|x(0)| for every n >= -1.")
    cyc = ", ".join(_cycle_text(c) for c in cert.cycles)
    if cert.status == FULL:
        lines.append(f"  (b) Every trajectory ends in one of the cycles {cyc}.")
    else:
        lines.append(f"  (b) Every trajectory is eventually periodic; cycles found: {cyc}.")
        lines.append(f"      Completeness of this list is proved only for block exponents up to {cert.detail}.")
    lines.append("")
    lines.append(f"Proof of (a). Put A = {q(c1)}*|x(-1)| + {q(c2)}*|x(0)|, u = x(n-1), v = x(n), w = x(n+1).")
    lines.append("By induction on n we establish, for whichever case applies at n:")
    for s in STATES:
        forms = ", ".join(f"|{_form_text(uq(p), uq(r), 'x(n-1)', 'x(n)')}|" for p, r in cert.scheme[s])
        a, b = PARITY_WORDS[s]
        lines.append(f"  Case {CASE_NAMES[s]}(n): x(n-1) {a}, x(n) {b}: {forms} <= A.")
    lines.append(f"Each form has |p| <= {q(c1)} and |q| <= {q(c2)}, so the claim holds at n = 0.")
    letters: dict[tuple[str, str], str] = {}
    for d in cert.derivations:
        s, s2 = d["from"], d["to"]
        if (s, s2) not in letters:
            k = sum(1 for key in letters if key[0] == s)
            letters[(s, s2)] = "abcdefghijklmnopqrstuvwxyz"[k]
            a, b = PARITY_WORDS[s]
            c, e = PARITY_WORDS[s2]
            lines.append(
                f"  Case {CASE_NAMES[s]}{letters[(s, s2)]}: (x(n-1), x(n)) = ({a}, {b}), (x(n), x(n+1)) = ({c}, {e})."
            )
        src = _form_text(uq(d["source"][0]), uq(d["source"][1]), "v", "w")
        tgt = _form_text(uq(d["target"][0]), uq(d["target"][1]), "u", "v")
        comb = ""
        for t in d["combination"]:
            c = uq(t["coeff"])
            term = f"{q(abs(c))}*({_form_text(uq(t['form'][0]), uq(t['form'][1]), 'u', 'v')})"
            comb += ("-" if c < 0 else "") + term if not comb else (" - " if c < 0 else " + ") + term
        tot = sum(abs(uq(t["coeff"])) for t in d["combination"])
        lines.append(f"    {src} = {tgt} = {comb}; coefficient sum {q(tot)} <= 1, so |{src}| <= A.")
    lines.append("This gives Case " + CASE_NAMES["OO"] + "(n+1), II(n+1) or III(n+1), and (a) follows.")
    lines.append("")
    lines.append(
        f"Proof of (b). Up to length {cert.max_len} the parity words compatible with (a) are exactly "
        f"the instances of {len(cert.families)} families:"
    )
    for f in cert.families:
        lines.append(f"  {f['human']}  [{f['program']}]")
    okc = sum(1 for r in cert.completeness if r["status"] == "SYMBOLIC_RULED_OUT")
    lines.append(
        f"No family extends by a symbol outside the list: {okc} of {len(cert.completeness)} extensions "
        "are ruled out for every exponent."
    )
    for r in cert.completeness:
        if r["status"] != "SYMBOLIC_RULED_OUT":
            lines.append(f"  {r['family']} + {r['symbol']}: {r['status']} (checked up to {r['checked_up_to']})")
    lines.append("A cycle with parity word W needs det(M_W - I) = 0 for the product M_W of its transfer matrices:")
    for rec in cert.determinants:
        det = rec.get("det_text") or ("no closed form" if rec["nvars"] else rec["samples"][0][1])
        zs = ", ".join(_cycle_text(z) for z in rec["zeros"][:8])
        more = "" if len(rec["zeros"]) <= 8 else f", ... ({len(rec['zeros'])} in all)"
        lines.append(f"  {rec['human']}: det(M - I) = {det}; zeros {zs or 'none'}{more}; {rec['verdict']}")
        for c in rec["classes"]:
            if c["kind"] != "nonzero":
                lines.append(f"    {c['region']}, parities {tuple(c['parities'])}: {c['kind']}, {c['detail']}")
    if cert.axis_cycles:
        lines.append("Seeds on the axes and units: " + ", ".join(_cycle_text(c) for c in cert.axis_cycles) + ".")
    lines.append("The integer null vectors at the zeros give the cycles " + cyc + ".")
    for n in cert.notes:
        lines.append(f"Note: {n}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- verification


class _Reject(Exception):
    pass


@dataclass
class VerifyReport:
    ok: bool
    discrepancy: str | None
    checks: list[str]

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "PASS (" + "; ".join(self.checks) + ")"
        return f"FAIL: {self.discrepancy}"


def _need(cond: bool, msg: str):
    if not cond:
        raise _Reject(msg)


def _signs(rule_id) -> tuple[int, ...]:
    _need(isinstance(rule_id, str) and len(rule_id) == 8 and set(rule_id) <= {"+", "-"}, f"bad rule id {rule_id!r}")
    return tuple(1 if c == "+" else -1 for c in rule_id)


def _coef(signs, state: str) -> tuple[Fraction, Fraction]:
    i = {"EE": 0, "OO": 2, "OE": 4, "EO": 6}[state]
    half = Fraction(1, 2) if state in ("EE", "OO") else Fraction(1)
    return signs[i] * half, signs[i + 1] * half


def _st(p_prev: int, p_cur: int) -> str:
    return ("O" if p_prev % 2 else "E") + ("O" if p_cur % 2 else "E")


def _next(signs, u: int, v: int) -> int:
    cu, cv = _coef(signs, _st(u, v))
    w = cu * u + cv * v
    _need(w.denominator == 1, f"non-integer step from ({u}, {v})")
    return int(w)


def _canon(vals) -> tuple[int, ...]:
    vals = tuple(vals)
    n = len(vals)
    for d in range(1, n + 1):
        if n % d == 0 and vals == vals[:d] * (n // d):
            vals = vals[:d]
            break
    return min(vals[i:] + vals[:i] for i in range(len(vals)))


def _closes(signs, vals) -> bool:
    n = len(vals)
    if n == 0:
        return False
    return all(_next(signs, vals[i], vals[(i + 1) % n]) == vals[(i + 2) % n] for i in range(n))


def _orbit_cycle(signs, seed, max_steps=10_000, mag=10**9):
    """The cycle a seed ends in, with whether the seed pair lies on it."""
    seen = {}
    vals = [seed[0], seed[1]]
    for k in range(max_steps):
        pair = (vals[-2], vals[-1])
        if pair in seen:
            j = seen[pair]
            body = vals[j:-2]
            return _canon(body), j == 0
        seen[pair] = len(vals) - 2
        vals.append(_next(signs, *pair))
        if abs(vals[-1]) > mag:
            return None, False
    return None, False


def _program(text) -> tuple[list[str], list[tuple[str, int]], int]:
    """(literals, blocks, eps) of a family program; literals has one more entry."""
    _need(isinstance(text, str) and text.count("|") >= 2, f"bad family program {text!r}")
    parts = text.split("|")
    _need(parts[-1] in ("+", "-"), f"bad sign in family program {text!r}")
    body = parts[:-1]
    if len(body) == 2 and "[" not in text:  # a fixed word: prefix and empty suffix
        _need(body[1] == "", f"bad family program {text!r}")
        body = body[:1]
        _need(len(body[0]) > 0, f"empty word in {text!r}")
    _need(len(body) % 2 == 1, f"bad family program {text!r}")

    def word(s):
        _need(set(s) <= {"1", "2"}, f"bad literal {s!r} in {text!r}")
        return s.replace("2", "0")

    lits, blocks = [word(body[0])], []
    for j in range(1, len(body) - 1, 2):
        core = body[j]
        _need(core.startswith("[") and "]^" in core, f"bad block {core!r} in {text!r}")
        b, low = core[1:].split("]^")
        _need(b and low.isdigit(), f"bad block {core!r} in {text!r}")
        blocks.append((word(b), int(low)))
        lits.append(word(body[j + 1]))
    _need(len(blocks) <= 2, f"more than two blocks in {text!r}")
    return lits, blocks, 1 if parts[-1] == "+" else -1


def _word(lits, blocks, exps) -> str:
    out = lits[0]
    for (b, _), m, lit in zip(blocks, exps, lits[1:]):
        out += b * m + lit
    return out


def _program_of(lits, blocks, eps) -> str:
    parts = [lits[0].replace("0", "2")]
    for (b, low), lit in zip(blocks, lits[1:]):
        parts += [f"[{b.replace('0', '2')}]^{low}", lit.replace("0", "2")]
    if not blocks:
        parts.append("")
    return "|".join(parts) + ("|+" if eps > 0 else "|-")


def _mm(A, B):
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


_ONE = Fraction(1)
_ZERO = Fraction(0)
_I = ((_ONE, _ZERO), (_ZERO, _ONE))


def _T(signs, a: str, b: str):
    cu, cv = _coef(signs, _st(int(a), int(b)))
    return ((_ZERO, _ONE), (cu, cv))


def _word_matrix(signs, w: str):
    """``M`` with ``M (x(-1), x(0)) = (x(L-1), x(L))`` if the trajectory follows ``w``."""
    M = _I
    for k in range(1, len(w)):
        M = _mm(_T(signs, w[k - 1], w[k]), M)
    return _mm(_T(signs, w[-1], w[0]), M)


def _dm(M) -> Fraction:
    return (M[0][0] - 1) * (M[1][1] - 1) - M[0][1] * M[1][0]


def _grid_matrices(signs, lits, blocks, M_max):
    """``{exps: M}`` on ``low_i <= m_i <= M_max``, by repeated right-multiplication."""
    if not blocks:
        w = lits[0]
        return {(): _word_matrix(signs, w)} if len(w) >= 2 else {}

    def run(chars, prev, M):
        for ch in chars:
            if prev is not None:
                M = _mm(_T(signs, prev, ch), M)
            prev = ch
        return M

    first = (lits[0] or blocks[0][0])[0]
    last = (lits[-1] or blocks[-1][0])[-1]
    b1 = blocks[0][0]
    heads = {}
    M = run(lits[0], None, _I)
    prev = lits[0][-1] if lits[0] else None
    for m in range(1, M_max + 1):
        M = run(b1, prev, M)
        prev = b1[-1]
        if m >= blocks[0][1]:
            heads[m] = M
    out = {}
    if len(blocks) == 1:
        for m, H in heads.items():
            out[(m,)] = _mm(_T(signs, last, first), run(lits[1], b1[-1], H))
        return out
    b2 = blocks[1][0]
    for m1, H in heads.items():
        M = run(lits[1], b1[-1], H)
        prev = lits[1][-1] if lits[1] else b1[-1]
        for m2 in range(1, M_max + 1):
            M = run(b2, prev, M)
            prev = b2[-1]
            if m2 >= blocks[1][1]:
                out[(m1, m2)] = _mm(_T(signs, last, first), run(lits[2], b2[-1], M))
    return out


def _ep_eval(terms, exps) -> Fraction:
    total = _ZERO
    for key, c in terms:
        v = c
        for b, m in zip(key, exps):
            v *= b**m
        total += v
    return total


def _ep_class(terms, fixed: dict[int, int], parities: dict[int, int]):
    """Substitute fixed exponents and fold negative bases on the parity class."""
    acc: dict[tuple, Fraction] = {}
    for key, c in terms:
        key = list(key)
        for i, val in fixed.items():
            c *= key[i] ** val
            key[i] = _ONE
        for i, r in parities.items():
            if key[i] < 0:
                key[i] = -key[i]
                if r % 2:
                    c = -c
        k = tuple(key)
        acc[k] = acc.get(k, _ZERO) + c
    return [(k, c) for k, c in acc.items() if c != 0]


def _class_start(M_max: int, parity: int) -> int:
    m = M_max + 1
    return m if m % 2 == parity else m + 1


def _dominant_1d(terms, var: int, start: int, limit: int = 4096):
    """Class points from ``start`` (step 2) where the sum may vanish, or None if no term dominates."""
    live = [(k[var], c) for k, c in terms if k[var] != 0]
    if not live:
        return None
    top = max(b for b, _ in live)
    ctop = sum(c for b, c in live if b == top)
    m = start
    while sum(abs(c) * (b / top) ** m for b, c in live if b != top) >= abs(ctop):
        m += 2
        if m - start > limit:
            return None
    # below the threshold every class point is evaluated
    return [k for k in range(start, m, 2) if _ep_eval([((b,), c) for b, c in live], (k,)) == 0]


def _dominant_2d(terms, start) -> bool:
    live = [(k, c) for k, c in terms if k[0] != 0 and k[1] != 0]
    if not live:
        return False
    t = (max(k[0] for k, _ in live), max(k[1] for k, _ in live))
    ctop = sum(c for k, c in live if k == t)
    if ctop == 0:
        return False
    rest = sum(abs(c) * (k[0] / t[0]) ** start[0] * (k[1] / t[1]) ** start[1] for k, c in live if k != t)
    return rest < abs(ctop)


def _has_oo(w: str) -> bool:
    return any(w[i] == "1" and w[(i + 1) % len(w)] == "1" for i in range(len(w)))


def _null(A) -> tuple[Fraction, Fraction] | None:
    for row in A:
        if row[0] != 0 or row[1] != 0:
            return (row[1], -row[0])
    return None


def _int_dir(v) -> tuple[int, int]:
    den = math.lcm(v[0].denominator, v[1].denominator)
    a, b = int(v[0] * den), int(v[1] * den)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


def _rat_list(x, n: int, what: str) -> list[Fraction]:
    _need(isinstance(x, list) and len(x) == n, f"{what}: expected {n} rationals")
    try:
        return [uq(y) for y in x]
    except CertificateError as exc:
        raise _Reject(f"{what}: {exc}") from exc


def _check_scheme(cert, signs, checks):
    _need(cert.coeffs is not None and cert.scheme is not None, "no bound coefficients or scheme")
    c1, c2 = _rat_list(cert.coeffs, 2, "coeffs")
    _need(c1 >= 0 and c2 >= 0, "negative bound coefficients")
    _need(isinstance(cert.scheme, dict) and set(cert.scheme) == set(STATES), "scheme must list forms for OO, OE, EO")
    forms = {}
    for s in STATES:
        fs = [tuple(_rat_list(f, 2, f"form of {s}")) for f in cert.scheme[s]]
        _need((_ONE, _ZERO) in fs and (_ZERO, _ONE) in fs, f"state {s} lacks the forms u and v")
        forms[s] = fs
    based = set()
    for b in cert.base:
        s = b.get("state")
        _need(s in forms, f"base check for unknown state {s!r}")
        p, r = _rat_list(b.get("form"), 2, "base form")
        bc1, bc2 = _rat_list(b.get("bound"), 2, "base bound")
        _need((bc1, bc2) == (c1, c2), f"base check of {s} form ({q(p)}, {q(r)}) uses bound ({q(bc1)}, {q(bc2)}) not the proved one")
        _need(abs(p) <= c1 and abs(r) <= c2, f"base check fails for {s} form ({q(p)}, {q(r)})")
        based.add((s, (p, r)))
    for s in STATES:
        for f in forms[s]:
            _need((s, f) in based, f"no base check for {s} form ({q(f[0])}, {q(f[1])})")
    proved = set()
    for i, d in enumerate(cert.derivations):
        s, s2 = d.get("from"), d.get("to")
        _need(s in forms and s2 in SUCCESSORS.get(s, ()), f"derivation {i}: {s}->{s2} is not a transition")
        g = tuple(_rat_list(d.get("source"), 2, f"derivation {i} source"))
        _need(g in forms[s2], f"derivation {i}: source is not a form of {s2}")
        cu, cv = _coef(signs, s)
        want = (g[1] * cu, g[0] + g[1] * cv)
        tgt = tuple(_rat_list(d.get("target"), 2, f"derivation {i} target"))
        _need(tgt == want, f"derivation {i} ({s}->{s2}): target is not the rewritten source")
        acc = [_ZERO, _ZERO]
        tot = _ZERO
        for t in d.get("combination", []):
            h = tuple(_rat_list(t.get("form"), 2, f"derivation {i} hypothesis"))
            c = _rat_list([t.get("coeff")], 1, f"derivation {i} coefficient")[0]
            _need(h in forms[s], f"derivation {i}: hypothesis is not a form of {s}")
            acc[0] += c * h[0]
            acc[1] += c * h[1]
            tot += abs(c)
        _need(tuple(acc) == want, f"derivation {i} ({s}->{s2}): linear identity broken")
        _need(tot <= 1, f"derivation {i} ({s}->{s2}): coefficient sum {q(tot)} > 1")
        proved.add((s, s2, g))
    for s in STATES:
        for s2 in SUCCESSORS[s]:
            for g in forms[s2]:
                _need((s, s2, g) in proved, f"transition {s}->{s2} lacks a derivation of ({q(g[0])}, {q(g[1])})")
    checks.append(f"scheme: {len(cert.derivations)} derivations, {len(cert.base)} base checks")


def _allowed(a: str, b: str) -> str:
    if a == "1" and b == "1":
        return "01"
    return "1" if a != b else ""


def _split(lits, blocks):
    for i, (b, low) in enumerate(blocks):
        if low == 0:
            up = list(blocks)
            up[i] = (b, 1)
            merged = lits[: i] + [lits[i] + lits[i + 1]] + lits[i + 2:]
            rest = blocks[:i] + blocks[i + 1:]
            if not rest:
                merged = [merged[0] + "".join(merged[1:])]
            return _split(lits, up) + _split(merged, rest)
    return [(lits, blocks)]


def _check_families(cert, checks):
    _need(cert.cover_verified is True, "the family cover was not verified")
    _need(cert.families, "no families")
    fams = []
    for f in cert.families:
        lits, blocks, eps = _program(f.get("program"))
        exits = f.get("exits", "")
        _need(isinstance(exits, str) and set(exits) <= {"0", "1"}, f"bad exits {exits!r}")
        fams.append((f["program"], lits, blocks, eps, exits))
    want = set()
    for prog, lits, blocks, eps, exits in fams:
        w = _word(lits, blocks, [max(low, 2) for _, low in blocks])
        _need(len(w) >= 2, f"family {prog} is too short")
        for ch in _allowed(w[-2], w[-1]):
            if ch not in exits:
                want.add((prog, ch))
    have = {}
    for r in cert.completeness:
        key = (r.get("family"), r.get("symbol"))
        _need(key not in have, f"duplicate completeness entry {key}")
        have[key] = r.get("status")
    _need(set(have) == want, f"completeness entries do not match the obligations: missing {sorted(want - set(have))[:3]}, extra {sorted(set(have) - want)[:3]}")
    _need(all(s in ("SYMBOLIC_RULED_OUT", "BOUNDED") for s in have.values()), "a completeness obligation failed")
    cyc = set()
    for prog, lits, blocks, eps, exits in fams:
        for l2, b2 in _split(lits, blocks):
            w = _word(l2, b2, [max(low, 1) for _, low in b2])
            if len(w) >= 2 and not (w[0] == "0" and w[-1] == "0"):
                cyc.add(_program_of(l2, b2, eps))
    got = [d.get("family") for d in cert.determinants]
    _need(len(got) == len(set(got)), "a cycle family is analysed twice")
    _need(set(got) == cyc, f"determinant analyses do not match the cycle families: missing {sorted(cyc - set(got))[:3]}, extra {sorted(set(got) - cyc)[:3]}")
    checks.append(f"families: {len(fams)} families, {len(want)} obligations, {len(cyc)} cycle families")
    return all(s == "SYMBOLIC_RULED_OUT" for s in have.values())


def _expected_classes(blocks, M_max):
    if len(blocks) == 1:
        return {((0,), (), (p,)) for p in (0, 1)}
    if len(blocks) == 2:
        out = set()
        for var, other in ((0, 1), (1, 0)):
            for val in range(blocks[other][1], M_max + 1):
                for p in (0, 1):
                    out.add(((var,), ((other, val),), (p,)))
        for p1 in (0, 1):
            for p2 in (0, 1):
                out.add(((0, 1), (), (p1, p2)))
        return out
    return set()


def _check_determinant(cert, signs, rec, M_max, seeds):
    """Re-derive one analysis; returns its verdict and adds candidate seeds."""
    name = rec.get("family")
    lits, blocks, _ = _program(name)
    n = len(blocks)
    _need(rec.get("nvars") == n, f"{name}: wrong number of exponents")
    _need(all(low >= 1 for _, low in blocks), f"{name}: cycle families need exponents >= 1")
    grid = _grid_matrices(signs, lits, blocks, M_max)
    zeros, degenerate = set(), set()
    for exps, A in grid.items():
        if _dm(A) == 0:
            if A == _I:
                degenerate.add(exps)
            else:
                zeros.add(exps)
    claimed = {tuple(z) for z in rec.get("zeros", [])}
    inside = {z for z in claimed if all(m <= M_max for m in z)}
    _need(inside == zeros, f"{name}: zero list differs from the exact grid, e.g. {sorted(inside ^ zeros)[:2]}")
    _need({tuple(z) for z in rec.get("degenerate", [])} == degenerate, f"{name}: degenerate list differs")
    for exps, val in rec.get("samples", []):
        w = _word(lits, blocks, exps)
        _need(_dm(_word_matrix(signs, w)) == uq(val), f"{name}: sample at {exps} is wrong")
    classes = rec.get("classes", [])
    det = rec.get("det")
    kinds = []
    outside = set(claimed - inside)
    if det is None:
        _need(n == 0 or any(c.get("kind") == "open" and not c.get("symbolic") for c in classes), f"{name}: no closed form but no open tail")
        kinds.append("open" if n else "nonzero")
    else:
        terms = []
        for key, c in det:
            _need(isinstance(key, list) and len(key) == n, f"{name}: bad determinant term")
            terms.append((tuple(uq(b) for b in key), uq(c)))
        # identity check: the true det(M - I) satisfies a linear recurrence of
        # order <= 4 in each exponent, the claimed one of order #bases
        sizes = [4 + len({k[i] for k, _ in terms}) for i in range(n)]
        pts = [()]
        for sz in sizes:
            pts = [p + (m,) for p in pts for m in range(1, sz + 1)]
        for exps in pts:
            true = _dm(_word_matrix(signs, _word(lits, blocks, exps)))
            _need(_ep_eval(terms, exps) == true, f"{name}: closed form is wrong at {exps}")
        want = _expected_classes(blocks, M_max)
        got = set()
        for c in classes:
            sym = tuple(c.get("symbolic", []))
            fixed = tuple(tuple(x) for x in c.get("fixed", []))
            par = tuple(c.get("parities", []))
            key = (sym, fixed, par)
            _need(key in want and key not in got, f"{name}: unexpected tail class {key}")
            got.add(key)
            kind = c.get("kind")
            fx = dict(fixed)
            cls = dict(zip(sym, par))
            start = tuple(_class_start(M_max, p) for p in par)
            red = _ep_class(terms, fx, cls)
            if kind == "nonzero":
                if len(sym) == 1:
                    hits = _dominant_1d(red, sym[0], start[0])
                    _need(hits is not None, f"{name}: no dominant term in class {key}")
                    for k in hits:
                        z = tuple(fx.get(i, k) for i in range(n))
                        _need(z in outside, f"{name}: zero {z} past the grid is not listed")
                        outside.discard(z)
                else:
                    _need(_dominant_2d(red, start), f"{name}: no dominant term in class {key}")
            elif kind == "fixed-null":
                v = tuple(_rat_list(c.get("null"), 2, f"{name} null vector"))
                _need(v != (_ZERO, _ZERO), f"{name}: zero null vector")
                # (M - I) v has order <= 3 in each exponent along a parity class
                probe = [()]
                for i in range(n):
                    if i in cls:
                        probe = [p + (start[sym.index(i)] + 2 * j,) for p in probe for j in range(3)]
                    else:
                        probe = [p + (fx[i],) for p in probe]
                for exps in probe:
                    w = _word(lits, blocks, exps)
                    A = _word_matrix(signs, w)
                    img = ((A[0][0] - 1) * v[0] + A[0][1] * v[1], A[1][0] * v[0] + (A[1][1] - 1) * v[1])
                    _need(img == (_ZERO, _ZERO), f"{name}: null vector fails at {exps}")
                    _need(_has_oo(w), f"{name}: word {w} has no odd-odd pair, M = I is possible")
                seeds.add(_int_dir(v))
            else:
                _need(kind == "open", f"{name}: unknown class kind {kind!r}")
            kinds.append(kind)
        _need(got == want, f"{name}: tail classes missing, e.g. {sorted(want - got)[:2]}")
    _need(not outside, f"{name}: listed zeros {sorted(outside)[:2]} past the grid are not zeros")
    if degenerate or "open" in kinds:
        verdict = "BOUNDED_ONLY"
    elif "fixed-null" in kinds:
        verdict = "RIGOROUS_FIXED_NULL"
    else:
        verdict = "RIGOROUS_NONZERO"
    _need(rec.get("verdict") == verdict, f"{name}: verdict {rec.get('verdict')} but the classes give {verdict}")
    for z in claimed:
        w = _word(lits, blocks, z)
        A = _word_matrix(signs, w)
        v = _null(((A[0][0] - 1, A[0][1]), (A[1][0], A[1][1] - 1)))
        if v is None:
            continue
        a, b = _int_dir(v)
        if a == 0 or b == 0:
            continue
        vals = [a, b]
        for _ in range(len(w)):
            vals.append(_next(signs, vals[-2], vals[-1]))
        if (vals[len(w)], vals[len(w) + 1]) == (a, b):
            seeds.add(("cycle", _canon(vals[: len(w)])))
    return verdict


def _verify(cert: TheoremCertificate) -> list[str]:
    checks: list[str] = []
    _need(cert.version == VERSION, f"unsupported version {cert.version}")
    signs = _signs(cert.rule)
    _need(cert.convention == CONVENTION, "convention note differs")
    if cert.agkl is not None:
        a, b, c, d = cert.agkl
        _need(signs == (a, b, a, b, c, d, c, d), "AGKL tuple does not match the rule id")
    _need(cert.status in (FULL, BOUNDED_ONLY, FAILED), f"unknown status {cert.status!r}")
    for i, c in enumerate(cert.cycles):
        _need(isinstance(c, list) and c and all(isinstance(x, int) for x in c), f"cycle {i} is malformed")
        _need(_closes(signs, c), f"claimed cycle {_cycle_text(c)} does not close under the rule")
        _need(tuple(c) == _canon(c), f"cycle {_cycle_text(c)} is not in canonical form")
    if cert.cycles:
        checks.append(f"{len(cert.cycles)} cycles close by stepping")
    if cert.witness is not None:
        w = cert.witness
        u, v = w["seed"]
        for _ in range(w["step"]):
            u, v = v, _next(signs, u, v)
        _need(str(v) == w["value"] and abs(v) > 10**6, "growth witness does not reproduce")
        checks.append(f"witness reaches {v} at step {w['step']}")
    if cert.status == FAILED:
        _need(bool(cert.detail), "FAILED without a stage")
        if cert.detail == "bound-conjecture":
            _need(cert.coeffs is None and cert.conjectured is None, "bound-conjecture failure with a bound")
        return checks
    _check_scheme(cert, signs, checks)
    complete = _check_families(cert, checks)
    _need(isinstance(cert.M_max, int) and cert.M_max >= 1, "missing M_max")
    seeds: set = set()
    verdicts = [_check_determinant(cert, signs, rec, cert.M_max, seeds) for rec in cert.determinants]
    checks.append(f"{len(verdicts)} determinant analyses re-derived")
    axis = set()
    for s in UNIT_SEEDS:
        c, _ = _orbit_cycle(signs, s)
        if c is not None:
            axis.add(c)
    _need({tuple(c) for c in cert.axis_cycles} == axis, "axis cycles differ from the unit and axis seeds")
    found = set(axis)
    for s in seeds:
        if s[0] == "cycle":
            found.add(s[1])
        elif s[0] != 0 and s[1] != 0:
            c, on = _orbit_cycle(signs, s)
            if c is not None and on:
                found.add(c)
    found |= {_canon(tuple(-x for x in c)) for c in found}
    claimed = {tuple(c) for c in cert.cycles}
    _need(claimed == found, f"cycle list differs from the re-derived one: missing {sorted(found - claimed)[:2]}, extra {sorted(claimed - found)[:2]}")
    rigorous = complete and all(v != "BOUNDED_ONLY" for v in verdicts)
    want = FULL if rigorous else BOUNDED_ONLY
    _need(cert.status == want, f"status {cert.status} but the checks give {want}")
    if want == BOUNDED_ONLY:
        _need(cert.detail == str(cert.M_max), "BOUNDED_ONLY must carry its exponent bound")
    checks.append(f"status {cert.label} confirmed")
    return checks


def verify(cert: TheoremCertificate | str) -> VerifyReport:
    """Re-check a certificate (object or JSON text) from scratch."""
    try:
        if isinstance(cert, str):
            cert = parse_certificate(cert)
        checks = _verify(cert)
    except CertificateError as exc:
        return VerifyReport(False, f"parse error: {exc}", [])
    except _Reject as exc:
        return VerifyReport(False, str(exc), [])
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        return VerifyReport(False, f"malformed certificate: {exc!r}", [])
    return VerifyReport(True, None, checks)


# ---------------------------------------------------------------- diff


def diff(a: TheoremCertificate, b: TheoremCertificate) -> list[str]:
    """Field-wise changes between two certificates of one rule."""
    if a.rule != b.rule:
        raise ValueError(f"different rules {a.rule} and {b.rule}")
    out = []
    if a.label != b.label:
        out.append(f"status: {a.label} -> {b.label}")
    if a.coeffs != b.coeffs:
        out.append(f"coeffs: {a.coeffs} -> {b.coeffs}")
    ca = {_canon(c) for c in a.cycles}
    cb = {_canon(c) for c in b.cycles}
    for c in sorted(ca - cb):
        out.append(f"cycle removed: {_cycle_text(c)}")
    for c in sorted(cb - ca):
        out.append(f"cycle added: {_cycle_text(c)}")
    fa = [f["program"] for f in a.families]
    fb = [f["program"] for f in b.families]
    if fa != fb:
        out.append(f"families: {len(fa)} -> {len(fb)}")
    va = {d["family"]: d["verdict"] for d in a.determinants}
    vb = {d["family"]: d["verdict"] for d in b.determinants}
    for k in sorted(set(va) | set(vb)):
        if va.get(k) != vb.get(k):
            out.append(f"verdict {k}: {va.get(k)} -> {vb.get(k)}")
    return out
