#!/usr/bin/env python3
"""Walk one rule through every stage and print what each stage found.

    python3 scripts/explore_rule.py CL
    python3 scripts/explore_rule.py "(-1,1,-1,-1)" --grid 60
"""

import argparse

from collatz2d.cli import classify
from collatz2d.certificate import emit, verify
from collatz2d.cycles import det_condition, solve_zeros
from collatz2d.families import cycle_families, mine
from collatz2d.parity import enumerate_sequences
from collatz2d.prover import prove_bound, survey_bounds
from collatz2d.recurrence import RuleSpec, cycle_census


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("rule")
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--max-len", type=int, default=24)
    args = p.parse_args()
    rule = RuleSpec.parse(args.rule)
    print(f"rule {rule.id}  agkl {rule.agkl()}")

    census = cycle_census(rule, args.grid, max_mag=10**9)
    print(f"simulation over |a|,|b| <= {args.grid}:")
    for c, n in census.reached.items():
        print(f"  {c}  <- {n} seeds")
    if census.escaped:
        print(f"  {len(census.escaped)} seeds escaped, e.g. {census.escaped[0]}")

    survey = survey_bounds(rule, args.grid)
    if survey.witness:
        seed, n, v = survey.witness
        print(f"witness: seed {seed} reaches {v} at step {n}")
    bp = prove_bound(rule, args.grid)
    if bp.proof is None:
        why = bp.failure or "no candidate survives the simulations"
        print(f"no bound proved: {why}")
        return
    print(f"bound c = ({bp.coeffs.c1}, {bp.coeffs.c2}); scheme sizes "
          + ", ".join(f"{s.name} {len(fs)}" for s, fs in bp.proof.scheme.forms.items()))

    sets = enumerate_sequences(rule, bp.coeffs, args.max_len)
    print("feasible words per length: " + " ".join(f"{L}:{len(v)}" for L, v in sorted(sets.items())))
    fams = mine(sets)
    print(f"{len(fams)} families:")
    for f in fams:
        print(f"  {f.human():28s} {f.program()}")
    for f in cycle_families(fams):
        zs = solve_zeros(rule, det_condition(rule, f), 64)
        print(f"  det {f.human():24s} {zs.verdict:20s} zeros {list(zs.zeros)[:6]}")

    cert = classify(rule, grid=args.grid, max_len=args.max_len)
    print()
    print(emit(cert)[1])
    print(f"verifier: {verify(cert)}")


if __name__ == "__main__":
    main()
