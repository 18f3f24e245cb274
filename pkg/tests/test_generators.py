from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from blackwell_mdp import polynomial as P
from blackwell_mdp.blackwell import exact_blackwell_analysis
from blackwell_mdp.errors import NonMonotoneBreakpoints, NonOddN
from blackwell_mdp.exact_linear import scaled_difference, value_at
from blackwell_mdp.generators import (
    FIRST_NODE_VALUE,
    IntervalSpec,
    interval_instance,
    interval_rewards,
    lagrange_coefficients,
)
from blackwell_mdp.roots import isolate_roots_in_unit_interval

from .conftest import A1, A2, A3, FIFTHS


def test_example_one_values(ex1):
    assert ex1.n_states == 8 and ex1.n_actions == 3
    assert ex1.m == 9
    assert ex1.r_inf == 72
    for g in (Fraction(0), Fraction(1, 7), Fraction(3, 4), Fraction(99, 100)):
        assert value_at(ex1, A1, 0, g) == 1
        assert value_at(ex1, A2, 0, g) == 6 * g - 8 * g**2
    assert value_at(ex1, A3, 0, Fraction(3, 4)) == 1


def test_example_two_a2_curve(ex2):
    a2 = (1,) + (0,) * 5
    assert value_at(ex2, a2, 0, 0) == Fraction(9, 10)
    for k in range(1, 5):
        assert value_at(ex2, a2, 0, Fraction(k, 5)) == 1


def test_example_two_difference_roots(ex2):
    a1, a2 = (0,) * 6, (1,) + (0,) * 5
    q = scaled_difference(ex2, a1, a2, 0)
    roots = isolate_roots_in_unit_interval(q)
    assert [r.value for r in roots] == [Fraction(k, 5) for k in range(1, 5)]
    signs = [P.sign_at(q, Fraction(2 * k + 1, 10)) for k in range(5)]
    assert signs == [1, -1, 1, -1, 1]


def test_interval_m_is_lcm_of_rewards(ex2):
    r = interval_rewards(IntervalSpec(FIFTHS))
    assert ex2.m == math.lcm(*(x.denominator for x in r))


def test_lagrange_reproduces_nodes():
    xs = [Fraction(0), Fraction(1, 3), Fraction(1, 2)]
    ys = [Fraction(2), Fraction(-1), Fraction(5, 7)]
    c = lagrange_coefficients(xs, ys)
    assert [P.evaluate(tuple(c), x) for x in xs] == ys


@pytest.mark.parametrize("bad, err", [
    ((0, Fraction(1, 2), 1), NonOddN),
    ((0, Fraction(1, 2), Fraction(1, 3), 1), NonMonotoneBreakpoints),
    ((Fraction(1, 5), Fraction(1, 2), 1), NonMonotoneBreakpoints),
    ((0, Fraction(1, 2), Fraction(3, 4), Fraction(9, 10)), NonMonotoneBreakpoints),
])
def test_invalid_specs(bad, err):
    with pytest.raises(err):
        IntervalSpec(bad)


odd_specs = st.integers(1, 3).flatmap(
    lambda k: st.sets(st.fractions(0, 1, max_denominator=12), min_size=2 * k,
                      max_size=2 * k)
    .filter(lambda s: 0 not in s and 1 not in s)
    .map(lambda s: (Fraction(0),) + tuple(sorted(s)) + (Fraction(1),)))


@given(odd_specs)
def test_interval_instances_alternate(spec):
    M = interval_instance(spec)
    N = len(spec) - 1
    a1, a2 = (0,) * (N + 1), (1,) + (0,) * N
    A = exact_blackwell_analysis(M)
    interior = list(spec[1:-1])
    assert [b.value for b in A.breakpoints if b.value != 0] == interior
    expected = [{a1} if k % 2 == 0 else {a2} for k in range(N)]
    assert A.optimal_sets_per_interval == expected
    assert A.blackwell_set == {a1}
    assert value_at(M, a2, 0, 0) == FIRST_NODE_VALUE
