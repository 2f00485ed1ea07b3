"""Command-line driver: ``collatz2d <command> ...``.

Exit codes: 0 success, 2 usage error, 3 the bound stage failed (no
conjecture or no closed scheme), 4 family mining failed, 5 a certificate
failed verification, 1 any other pipeline failure.

The default output directory is ``$COLLATZ2D_OUT`` or ``./certificates``.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from . import certificate as C
from .cycles import (
    NoClosedForm,
    axis_cases,
    collect_cycles,
    concrete_zero_set,
    det_condition,
    solve_zeros,
)
from .families import Completeness, MiningFailed, completeness_check, cycle_families, mine, verify_cover
from .modmap import CLASSICAL, conjecture_cycles, parse_modmap
from .parity import enumerate_sequences
from .prover import prove_bound, survey_bounds
from .recurrence import CycleReached, Diverged, RuleSpec, all_rules, simulate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND, EXIT_MINING, EXIT_VERIFY = 0, 1, 2, 3, 4, 5
PUBLISHED_SUCCESS = 144
OUT_ENV = "COLLATZ2D_OUT"


class Timeout(Exception):
    pass


# ---------------------------------------------------------------- pipeline


@contextmanager
def _alarm(seconds: float | None):
    """Hard wall-clock stop for stages that take no deadline callback."""
    usable = seconds is not None and hasattr(signal, "SIGALRM")
    if usable:
        try:
            old = signal.signal(signal.SIGALRM, _on_alarm)
        except ValueError:  # not the main thread
            usable = False
    if usable:
        signal.setitimer(signal.ITIMER_REAL, max(seconds, 0.01))
    try:
        yield
    finally:
        if usable:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)


def _on_alarm(signum, frame):
    raise Timeout()


def classify(
    rule: RuleSpec,
    *,
    grid: int = 100,
    max_len: int = 24,
    M_max: int = 64,
    max_forms: int = 12,
    budget: float | None = 60.0,
) -> C.TheoremCertificate:
    """Run every stage on one rule; failures become ``FAILED(stage)``."""
    t_end = None if budget is None else time.monotonic() + budget

    def deadline():
        if t_end is not None and time.monotonic() > t_end:
            raise Timeout()

    stage = "bound-conjecture"
    kw: dict = {}
    try:
        with _alarm(budget):
            bp = prove_bound(rule, grid=grid, max_forms=max_forms)
            kw["bound"] = bp
            if bp.conjectured is None:
                return C.build_certificate(rule, C.FAILED, "bound-conjecture", **kw)
            if bp.coeffs is None:
                return C.build_certificate(rule, C.FAILED, "bound-proof", **kw)
            stage = "enumeration"
            sets = enumerate_sequences(rule, bp.coeffs, max_len, deadline=deadline)
            kw.update(max_len=max_len, sets=sets)
            stage = "mining"
            fams = mine(sets)
            ok = verify_cover(fams, sets)
            kw.update(families=fams, cover_verified=ok)
            if not ok:
                return C.build_certificate(rule, C.FAILED, "mining", **kw)
            stage = "completeness"
            rep = completeness_check(fams, rule, bp.coeffs, M_max, deadline=deadline)
            kw.update(completeness=rep, M_max=M_max)
            if rep.status == Completeness.FAILED:
                return C.build_certificate(rule, C.FAILED, "completeness", **kw)
            stage = "cycles"
            analyses = []
            for fam in cycle_families(fams):
                deadline()
                try:
                    cond = det_condition(rule, fam)
                    analyses.append((cond, solve_zeros(rule, cond, M_max)))
                except NoClosedForm as exc:
                    analyses.append((None, concrete_zero_set(rule, fam, M_max, str(exc))))
            zero_sets = [zs for _, zs in analyses]
            cl = collect_cycles(rule, zero_sets)
            kw.update(analyses=analyses, cycles=cl, axis=axis_cases(rule), notes=cl.notes)
            full = rep.status == Completeness.SYMBOLIC_RULED_OUT and cl.complete
            if full:
                return C.build_certificate(rule, C.FULL, **kw)
            return C.build_certificate(rule, C.BOUNDED_ONLY, str(M_max), **kw)
    except Timeout:
        return C.build_certificate(rule, C.FAILED, "timeout", notes=[f"budget {budget}s ran out during {stage}"], **_safe(kw))
    except MiningFailed as exc:
        return C.build_certificate(rule, C.FAILED, "mining", notes=[str(exc)], **_safe(kw))
    except Exception as exc:  # isolation: one rule never aborts a sweep
        return C.build_certificate(rule, C.FAILED, stage, notes=[f"{type(exc).__name__}: {exc}"], **_safe(kw))


def _safe(kw: dict) -> dict:
    # only the bound survives a late failure; later fields may be half-built
    return {"bound": kw["bound"]} if "bound" in kw else {}


def relabel(cert: C.TheoremCertificate, rule: RuleSpec) -> C.TheoremCertificate:
    """The certificate of a rule with the same effective signs."""
    data = cert.to_dict()
    data["rule"] = rule.id
    ag = rule.agkl()
    data["agkl"] = list(ag) if ag else None
    return C.TheoremCertificate.from_dict(data)


def _job(args):
    rid, opts = args
    t = time.monotonic()
    cert = classify(RuleSpec.from_id(rid), **opts)
    return rid, C.emit(cert)[0], time.monotonic() - t


def sweep(opts: dict, jobs: int = 1, rules=None) -> tuple[dict[str, C.TheoremCertificate], dict[str, float]]:
    """Classify every rule once per effective key; results are independent of ``jobs``."""
    rules = list(all_rules() if rules is None else rules)
    reps: dict[tuple, RuleSpec] = {}
    for r in rules:
        reps.setdefault(r.effective_key, r)
    work = [(r.id, opts) for r in reps.values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_job, work))
    else:
        done = [_job(w) for w in work]
    by_id = {rid: (C.parse_certificate(text), dt) for rid, text, dt in done}
    certs, times = {}, {}
    for r in sorted(rules, key=lambda r: r.id):
        rep = reps[r.effective_key]
        base, dt = by_id[rep.id]
        certs[r.id] = base if rep.id == r.id else relabel(base, r)
        times[r.id] = round(dt, 3) if rep.id == r.id else 0.0
    return certs, times


# ---------------------------------------------------------------- manifest


def _kind(cert: C.TheoremCertificate) -> str:
    if cert.status in (C.FULL, C.BOUNDED_ONLY):
        return "solved"
    if cert.detail == "bound-conjecture" and cert.witness:
        return "unbounded"
    return "open"


def manifest(certs: dict[str, C.TheoremCertificate]) -> dict:
    rules = {}
    counts: dict[str, int] = {}
    for rid in sorted(certs):
        c = certs[rid]
        rules[rid] = {
            "status": c.label,
            "agkl": c.agkl,
            "coeffs": c.coeffs,
            "cycles": len(c.cycles),
            "same_as": None,
        }
        key = c.label if c.status == C.FAILED else c.status
        counts[key] = counts.get(key, 0) + 1
    seen: dict[str, str] = {}
    for rid in sorted(certs):
        key = rid[2:]
        if key in seen:
            rules[rid]["same_as"] = seen[key]
        else:
            seen[key] = rid
    full = [r for r, c in certs.items() if c.status == C.FULL]
    bounded = sorted(r for r, c in certs.items() if c.status == C.BOUNDED_ONLY)
    success = len(full) + len(bounded)
    agkl = {}
    for rid in sorted(certs):
        c = certs[rid]
        if c.agkl:
            agkl["(" + ",".join(str(x) for x in c.agkl) + ")"] = {"rule": rid, "status": c.label, "kind": _kind(c)}
    kinds = {k: sum(1 for v in agkl.values() if v["kind"] == k) for k in ("solved", "unbounded", "open")}
    if success == PUBLISHED_SUCCESS:
        note = "count matches"
    elif len(full) == PUBLISHED_SUCCESS:
        note = "the FULL count matches; the excess is exactly the BOUNDED_ONLY rules listed"
    else:
        note = "per-rule list: every rule with status FULL or BOUNDED_ONLY is in 'rules'"
    return {
        "version": C.VERSION,
        "rules": rules,
        "counts": dict(sorted(counts.items())),
        "success": success,
        "published_success": PUBLISHED_SUCCESS,
        "discrepancy": {
            "difference": success - PUBLISHED_SUCCESS,
            "full": len(full),
            "bounded_only": bounded,
            "note": note,
        },
        "agkl16": agkl,
        "agkl16_counts": kinds,
        "open_cases": [k for k, v in agkl.items() if v["kind"] == "open"],
    }


def report(man: dict) -> str:
    lines = ["status counts:"]
    for k, n in man.get("counts", {}).items():
        lines.append(f"  {k:28s} {n}")
    lines.append(f"FULL + BOUNDED_ONLY: {man.get('success', 0)} (published: {man.get('published_success', PUBLISHED_SUCCESS)})")
    d = man.get("discrepancy", {})
    if d.get("difference"):
        lines.append(f"  difference {d['difference']:+d}: {d.get('note', '')}")
    bounded = d.get("bounded_only", [])
    if bounded:
        lines.append("BOUNDED_ONLY rules (bound c1,c2):")
        for rid in bounded:
            r = man["rules"][rid]
            lines.append(f"  {rid}  {r['status']}  c = ({', '.join(r['coeffs'] or [])})")
    ag = man.get("agkl16", {})
    if ag:
        lines.append("AGKL sub-table:")
        for k, v in ag.items():
            lines.append(f"  {k:16s} {v['rule']}  {v['kind']:9s} {v['status']}")
        kc = man.get("agkl16_counts", {})
        lines.append(f"  solved {kc.get('solved', 0)}, unbounded {kc.get('unbounded', 0)}, open {kc.get('open', 0)}")
    oc = man.get("open_cases", [])
    lines.append("open cases not proved: " + (", ".join(oc) if oc else "none"))
    return "\n".join(lines) + "\n"


def write_outputs(out: Path, certs: dict[str, C.TheoremCertificate], times: dict[str, float] | None = None) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    for rid, cert in certs.items():
        js, txt = C.emit(cert)
        (out / f"{rid}.json").write_text(js)
        (out / f"{rid}.txt").write_text(txt)
    man = manifest(certs)
    (out / "manifest.json").write_text(json.dumps(man, sort_keys=True, indent=1) + "\n")
    (out / "report.txt").write_text(report(man))
    if times is not None:
        (out / "timings.json").write_text(json.dumps(times, sort_keys=True, indent=1) + "\n")
    return man


# ---------------------------------------------------------------- commands


def _rule(text: str) -> RuleSpec:
    try:
        return RuleSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _seed(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a,b got {text!r}") from exc
    return a, b


def _out(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or "certificates")


def _opts(args) -> dict:
    return {
        "grid": args.grid,
        "max_len": args.max_len,
        "M_max": args.m_max,
        "max_forms": args.max_forms,
        "budget": args.budget if args.budget > 0 else None,
    }


def cmd_simulate(args) -> int:
    res = simulate(args.rule, args.seed, max_steps=args.steps, max_mag=args.mag)
    print(", ".join(str(x) for x in res.trajectory))
    o = res.outcome
    if isinstance(o, CycleReached):
        print(f"cycle {o.cycle} entered at index {o.entered_at}")
    elif isinstance(o, Diverged):
        print(f"diverged: |x| = {abs(o.value)} at step {o.at_step}")
    else:
        print(f"undecided after {o.steps} steps")
    return EXIT_OK


def cmd_conjecture(args) -> int:
    from .prover import conjecture_bound

    survey = survey_bounds(args.rule, args.grid)
    c = conjecture_bound(args.rule, args.grid, survey=survey)
    if c is None:
        print("no bound (c1, c2) fits the simulated trajectories")
        if survey.witness:
            seed, n, v = survey.witness
            print(f"witness: seed {seed[0]},{seed[1]} reaches {v} at step {n}")
        return EXIT_BOUND
    print(f"conjectured bound: |x(n)| <= {c.c1}*|x(-1)| + {c.c2}*|x(0)|")
    return EXIT_OK


def cmd_prove(args) -> int:
    bp = prove_bound(args.rule, grid=args.grid, max_forms=args.max_forms)
    if bp.coeffs is None:
        cert = C.build_certificate(args.rule, C.FAILED, "bound-conjecture" if bp.conjectured is None else "bound-proof", bound=bp)
        print(C.theorem_text(cert), end="")
        return EXIT_BOUND
    sch = bp.proof.scheme
    print(f"bound: c1 = {sch.coeffs.c1}, c2 = {sch.coeffs.c2}")
    for s, fs in sch.forms.items():
        print(f"  {s.value}: " + ", ".join(f"({p}, {q})" for p, q in fs))
    print(f"{len(bp.proof.transitions)} derivations, base checks {'pass' if bp.proof.valid else 'FAIL'}")
    return EXIT_OK


def _exit_for(cert: C.TheoremCertificate) -> int:
    if cert.status != C.FAILED:
        return EXIT_OK
    if cert.detail in ("bound-conjecture", "bound-proof"):
        return EXIT_BOUND
    if cert.detail == "mining":
        return EXIT_MINING
    return EXIT_FAIL


def cmd_classify(args) -> int:
    cert = classify(args.rule, **_opts(args))
    js, txt = C.emit(cert)
    out = _out(args)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{cert.rule}.json").write_text(js)
    (out / f"{cert.rule}.txt").write_text(txt)
    print(js if args.format == "structured" else txt, end="")
    return _exit_for(cert)


def cmd_sweep(args) -> int:
    certs, times = sweep(_opts(args), jobs=args.jobs)
    man = write_outputs(_out(args), certs, times)
    print(report(man), end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    bad = 0
    for path in args.files:
        rep = C.verify(Path(path).read_text())
        print(f"{path}: {rep}")
        bad += not rep.ok
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_modmap(args) -> int:
    spec = parse_modmap(Path(args.file).read_text()) if args.file else CLASSICAL
    res = conjecture_cycles(spec, args.seeds, max_steps=args.steps, max_mag=args.mag)
    for c in res.cycles:
        print(f"cycle ({','.join(str(x) for x in c)}) reached from {res.reached[c]} seeds")
    if res.diverged:
        print(f"{len(res.diverged)} seeds passed the magnitude cap, e.g. {res.diverged[0]}")
    if res.undecided:
        print(f"{len(res.undecided)} seeds undecided, e.g. {res.undecided[0]}")
    return EXIT_OK


def cmd_report(args) -> int:
    man = json.loads(Path(args.manifest).read_text()) if args.manifest else manifest({})
    print(report(man), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="collatz2d", description="Discover and prove results on two-term Collatz-type recurrences.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, rule=True):
        if rule:
            sp.add_argument("--rule", type=_rule, required=True, help="8-sign id, AGKL 4-tuple, CL or E6")
        sp.add_argument("--grid", type=int, default=100)
        sp.add_argument("--max-len", type=int, default=24)
        sp.add_argument("--m-max", type=int, default=64)
        sp.add_argument("--max-forms", type=int, default=12)
        sp.add_argument("--budget", type=float, default=60.0, help="seconds per rule; 0 disables")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("text", "structured"), default="text")

    s = sub.add_parser("simulate")
    s.add_argument("--rule", type=_rule, required=True)
    s.add_argument("--seed", type=_seed, required=True)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--mag", type=int, default=10**12)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("conjecture-bound")
    common(s)
    s.set_defaults(func=cmd_conjecture)
    s = sub.add_parser("prove")
    common(s)
    s.set_defaults(func=cmd_prove)
    s = sub.add_parser("classify")
    common(s)
    s.set_defaults(func=cmd_classify)
    s = sub.add_parser("sweep")
    common(s, rule=False)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("verify")
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("modmap")
    s.add_argument("--file", default=None, help="map description; default the classical 3n+1 map")
    s.add_argument("--seeds", type=int, default=1000, help="scan all |n| <= seeds")
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--mag", type=int, default=10**18)
    s.set_defaults(func=cmd_modmap)

    s = sub.add_parser("report")
    s.add_argument("manifest", nargs="?")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
