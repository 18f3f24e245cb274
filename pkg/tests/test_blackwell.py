from __future__ import annotations

from fractions import Fraction

import pytest

from blackwell_mdp.average import average_reward
from blackwell_mdp.blackwell import (
    blackwell_optimal_policy,
    eta_bound,
    eta_from,
    exact_blackwell_analysis,
    gamma_bar,
    gamma_pair,
)
from blackwell_mdp.errors import GammaOutOfRange, PolicySpaceTooLarge
from blackwell_mdp.exact_linear import value_at
from blackwell_mdp.model import enumerate_policies, make_instance
from blackwell_mdp.roots import compare_roots, simplest_between
from blackwell_mdp.solvers import optimal_policy_set

from .conftest import A1, A2, A3, small_corpus

CORPUS = small_corpus(25, max_states=3, max_actions=3, max_m=4, seed=11)


def test_gamma_pair_example_one(ex1):
    assert gamma_pair(ex1, A1, A2, 0).value == Fraction(1, 2)
    assert gamma_pair(ex1, A1, A3, 0).value == Fraction(3, 4)
    assert gamma_pair(ex1, A2, A2, 0).value == 0
    # states other than 0 never distinguish the policies
    assert gamma_pair(ex1, A1, A2, 3).value == 0


def test_gamma_bar(ex1, ex2):
    assert gamma_bar(ex1).value == Fraction(3, 4)
    assert gamma_bar(ex2).value == Fraction(4, 5)
    single = make_instance([[1], [0]], [[[0, 1]], [[0, 1]]])
    assert gamma_bar(single).value == 0


def test_example_one_analysis(ex1):
    A = exact_blackwell_analysis(ex1)
    assert A.gamma_bw.value == Fraction(3, 4)
    assert A.gamma_bar.value == Fraction(3, 4)
    assert A.blackwell_set == {A1}
    values = [b.value for b in A.breakpoints]
    assert Fraction(1, 4) in values and Fraction(1, 2) in values
    # the optimal set changes at 3/4 only, where a3 ties with a1
    k = values.index(Fraction(3, 4))
    assert A.breakpoint_sets[k] == {A1, A3}
    assert A.intervals[-1].optimal_set == {A1}
    assert A.intervals[-2].optimal_set == {A1}


def test_example_two_analysis(ex2):
    A = exact_blackwell_analysis(ex2)
    a1, a2 = (0,) * 6, (1,) + (0,) * 5
    assert [b.value for b in A.breakpoints] == [Fraction(k, 5) for k in range(1, 5)]
    assert A.optimal_sets_per_interval == [{a1}, {a2}, {a1}, {a2}, {a1}]
    assert A.gamma_bw.value == Fraction(4, 5)
    assert A.blackwell_set == {a1}


def test_single_action_instance():
    M = make_instance([[1], [2]], [[["1/2", "1/2"]], [[1, 0]]])
    A = exact_blackwell_analysis(M)
    assert A.gamma_bw.value == 0
    assert A.blackwell_set == {(0, 0)}
    assert len(A.intervals) == 1


def test_optimal_below_tie_and_non_blackwell_tie_policy(ex1):
    g1 = Fraction(1, 5)
    assert g1 < gamma_pair(ex1, A1, A2, 0).value
    assert A1 in optimal_policy_set(ex1, g1)
    g2 = Fraction(3, 4)
    assert value_at(ex1, A3, 0, g2) == value_at(ex1, A1, 0, g2) == 1
    assert A3 in optimal_policy_set(ex1, g2)
    assert A3 not in exact_blackwell_analysis(ex1).blackwell_set


@pytest.mark.parametrize("M", CORPUS)
def test_analysis_invariants(M):
    A = exact_blackwell_analysis(M)
    assert A.blackwell_set
    assert A.blackwell_set == A.intervals[-1].optimal_set
    assert compare_roots(A.gamma_bw, A.gamma_bar) <= 0
    for rec in A.intervals:
        assert rec.inner_lo < rec.sample < rec.inner_hi
        other = simplest_between(rec.sample, rec.inner_hi)
        assert optimal_policy_set(M, other) == rec.optimal_set
        assert optimal_policy_set(M, rec.sample) == rec.optimal_set
    for k, (beta, at) in enumerate(zip(A.breakpoints, A.breakpoint_sets)):
        if beta.is_exact:
            assert at == optimal_policy_set(M, beta.value)
    # policies optimal just left or right of a breakpoint are optimal at it
    inner = [b for b in A.breakpoints if not (b.is_exact and b.value == 0)]
    offset = len(A.breakpoints) - len(inner)
    for j in range(len(inner)):
        at = A.breakpoint_sets[offset + j]
        assert A.intervals[j].optimal_set <= at
        assert A.intervals[j + 1].optimal_set <= at


def test_corpus_exercises_irrational_breakpoints():
    assert any(not b.is_exact for M in CORPUS
               for b in exact_blackwell_analysis(M).breakpoints)


@pytest.mark.parametrize("M", CORPUS)
def test_bound_and_reduction(M):
    A = exact_blackwell_analysis(M)
    bound = eta_bound(M)
    assert compare_roots(A.gamma_bw, type(A.gamma_bw).exact(bound.gamma_threshold)) < 0
    assert blackwell_optimal_policy(M, "reduction") in A.blackwell_set
    assert blackwell_optimal_policy(M, "exact") in A.blackwell_set


@pytest.mark.parametrize("M", CORPUS)
def test_blackwell_policies_are_average_optimal(M):
    A = exact_blackwell_analysis(M)
    gains = {pi: average_reward(M, pi) for pi in enumerate_policies(M, canonical=True)}
    best = [max(g[s] for g in gains.values()) for s in range(M.n_states)]
    for pi in A.blackwell_set:
        assert gains[pi] == best


def test_eta_examples(ex1):
    b = eta_from(1, 1, 1)
    assert (b.N, b.L, b.eta) == (1, 8, Fraction(1, 18))
    assert b.gamma_threshold == Fraction(17, 18)
    e = eta_bound(ex1)
    assert e.N == 15
    assert e.L == 2 * 8 * 72 * 9**16 * 4**8
    assert 0 < e.eta < 1
    assert Fraction(3, 4) < e.gamma_threshold


def test_eta_with_zero_rewards():
    M = make_instance([[0, 0]], [[[1], [1]]])
    b = eta_bound(M)
    # 1 / (2 * 1^(5/2) * 1^1)
    assert b.L == 0 and b.eta == Fraction(1, 2)


def test_reduction_examples(ex1, ex2):
    assert blackwell_optimal_policy(ex1) == A1
    assert blackwell_optimal_policy(ex1, "exact") == A1
    assert blackwell_optimal_policy(ex2) == (0,) * 6
    assert blackwell_optimal_policy(ex2, "exact") == (0,) * 6


def test_reduction_gamma_checks(ex1):
    t = eta_bound(ex1).gamma_threshold
    assert blackwell_optimal_policy(ex1, gamma=(1 + t) / 2) == A1
    with pytest.raises(GammaOutOfRange):
        blackwell_optimal_policy(ex1, gamma=Fraction(9, 10))
    with pytest.raises(GammaOutOfRange):
        blackwell_optimal_policy(ex1, gamma=1)
    with pytest.raises(ValueError):
        blackwell_optimal_policy(ex1, "simplex")


def test_enumeration_guard(ex1):
    with pytest.raises(PolicySpaceTooLarge):
        exact_blackwell_analysis(ex1, guard=2)
    with pytest.raises(PolicySpaceTooLarge):
        blackwell_optimal_policy(ex1, "exact", guard=2)
