import functools
import os

import pytest
from hypothesis import HealthCheck, settings

from collatz2d.cli import classify
from collatz2d.families import cycle_families, mine
from collatz2d.parity import enumerate_sequences
from collatz2d.prover import prove_bound
from collatz2d.recurrence import RuleSpec

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=25)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CL = RuleSpec.parse("CL")
E6 = RuleSpec.parse("E6")


@functools.lru_cache(maxsize=None)
def pipeline(name: str):
    """(rule, bound proof, feasible sets, families) for a named rule."""
    rule = RuleSpec.parse(name)
    bp = prove_bound(rule)
    sets = enumerate_sequences(rule, bp.coeffs, 24)
    return rule, bp, sets, mine(sets)


@functools.lru_cache(maxsize=None)
def certificate_of(name: str):
    return classify(RuleSpec.parse(name))


@pytest.fixture(scope="session")
def cl_pipeline():
    return pipeline("CL")


@pytest.fixture(scope="session")
def e6_pipeline():
    return pipeline("E6")


@pytest.fixture(scope="session")
def cl_cert():
    return certificate_of("CL")


@pytest.fixture(scope="session")
def e6_cert():
    return certificate_of("E6")


@pytest.fixture(scope="session")
def cl_cycle_families(cl_pipeline):
    return cycle_families(cl_pipeline[3])


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
