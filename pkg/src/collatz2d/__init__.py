"""Discover-and-prove engine for two-term Collatz-type recurrences.

A rule picks ``x(n+1)`` as a signed combination of ``x(n-1)`` and ``x(n)``,
halved when both are odd, according to their parities.  The pipeline for a
rule conjectures and proves a bound ``|x(n)| <= c1|x(-1)| + c2|x(0)|``,
enumerates the parity words the bound allows, mines parametric families
from them, and solves every family for cycles.  The result is a certificate
that :func:`collatz2d.certificate.verify` re-checks on its own.
"""

from .recurrence import Cycle, RuleSpec, all_rules, iterate, simulate, step

__all__ = ["Cycle", "RuleSpec", "all_rules", "iterate", "simulate", "step"]
__version__ = "0.1.0"
