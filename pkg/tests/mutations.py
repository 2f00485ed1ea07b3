"""Single-site corruptions of a certificate dictionary.

Each generator yields ``(label, mutated_dict)``.  Values are perturbed, not
just deleted, so a verifier that only checks presence would still fail.
"""

import copy
from fractions import Fraction


def _bump(s, by=Fraction(1, 3)):
    return str(Fraction(s) + by)


def _neg(s):
    v = -Fraction(s)
    return str(v if v else Fraction(1))


def _at(d, path, fn):
    e = copy.deepcopy(d)
    obj = e
    for k in path[:-1]:
        obj = obj[k]
    fn(obj, path[-1])
    return e


def _set(fn):
    def apply(obj, key):
        obj[key] = fn(obj[key])
    return apply


def derivation_coefficients(d):
    for i, der in enumerate(d["derivations"]):
        for j, _ in enumerate(der["combination"]):
            path = ("derivations", i, "combination", j, "coeff")
            yield f"derivation {i}.{j} coeff +1/3", _at(d, path, _set(_bump))
            yield f"derivation {i}.{j} coeff negated", _at(d, path, _set(_neg))


def base_bounds(d):
    for i, b in enumerate(d["base"]):
        for k in range(len(b["bound"])):
            path = ("base", i, "bound", k)
            yield f"base {i} bound[{k}] +1", _at(d, path, _set(lambda s: _bump(s, 1)))
            yield f"base {i} bound[{k}] -1/2", _at(d, path, _set(lambda s: _bump(s, Fraction(-1, 2))))


def cycle_entries(d):
    for i, c in enumerate(d["cycles"]):
        for k in range(len(c)):
            path = ("cycles", i, k)
            yield f"cycle {i}[{k}] +1", _at(d, path, _set(lambda x: x + 1))
            yield f"cycle {i}[{k}] -1", _at(d, path, _set(lambda x: x - 1))


def determinant_zeros(d):
    for i, det in enumerate(d["determinants"]):
        for j, z in enumerate(det["zeros"]):
            yield f"det {i} zero {z} dropped", _at(d, ("determinants", i, "zeros"), lambda o, k: o[k].pop(j))
            for k in range(len(z)):
                path = ("determinants", i, "zeros", j, k)
                yield f"det {i} zero {z}[{k}] +1", _at(d, path, _set(lambda x: x + 1))


def all_sites(d):
    yield from derivation_coefficients(d)
    yield from base_bounds(d)
    yield from cycle_entries(d)
    yield from determinant_zeros(d)
