from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from blackwell_mdp.generators import example_one, interval_instance, random_instance

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

A1 = (0,) * 8
A2 = (1,) + (0,) * 7
A3 = (2,) + (0,) * 7

FIFTHS = (0, Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5), 1)


@pytest.fixture(scope="session")
def ex1():
    return example_one()


@pytest.fixture(scope="session")
def ex2():
    return interval_instance(FIFTHS)


def small_corpus(count, *, max_states, max_actions, max_m, r_max=4, seed=0):
    """Deterministic list of random instances with sizes drawn per instance."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(1, max_states)
        a = rng.randint(1, max_actions)
        m = rng.randint(1, max_m)
        out.append(random_instance(n, a, m, r_max, seed=seed * 100003 + k))
    return out


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Criterion number -> summary line, printed at the end of the run."""
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
