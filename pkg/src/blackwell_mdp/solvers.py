"""Discounted MDP solvers: exact policy iteration and float value iteration."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import GammaOutOfRange, NonConvergence, PolicySpaceTooLarge
from .exact_linear import check_gamma, evaluate_policy
from .model import (
    DEFAULT_POLICY_GUARD,
    MdpInstance,
    Policy,
    action_representatives,
    enumerate_policies,
)


@dataclass(frozen=True)
class SolveResult:
    policy: Policy
    values: tuple
    gamma: Fraction | float
    iterations: int


def q_values(M: MdpInstance, v: Sequence, gamma) -> list[list]:
    """``r[s][a] + gamma * P[s][a] . v`` for every state-action pair."""
    out = []
    for s in range(M.n_states):
        row = []
        for a in range(M.n_actions):
            dist = M.transitions[s][a]
            row.append(M.rewards[s][a]
                       + gamma * sum(p * x for p, x in zip(dist, v) if p))
        out.append(row)
    return out


def exact_policy_iteration(M: MdpInstance, gamma, *, initial: Policy | None = None,
                           trace: list | None = None) -> SolveResult:
    """Howard policy iteration in exact rational arithmetic.

    Improvement keeps the current action whenever it is still greedy and
    otherwise moves to the lowest-index greedy action, so the loop cannot
    cycle among equal-value policies. ``trace`` (if given) receives the value
    vector of every evaluated policy.
    """
    g = check_gamma(gamma)
    pi = tuple(initial) if initial is not None else (0,) * M.n_states
    iterations = 0
    while True:
        iterations += 1
        v = evaluate_policy(M, pi, g)
        if trace is not None:
            trace.append(tuple(v))
        q = q_values(M, v, g)
        new = list(pi)
        for s, row in enumerate(q):
            best = max(row)
            if row[pi[s]] != best:
                new[s] = row.index(best)
        if tuple(new) == pi:
            return SolveResult(pi, tuple(v), g, iterations)
        pi = tuple(new)


def greedy_action_sets(M: MdpInstance, v: Sequence, gamma, *,
                       canonical: bool = True) -> list[list[int]]:
    q = q_values(M, v, gamma)
    reps = action_representatives(M) if canonical else None
    sets = []
    for s, row in enumerate(q):
        best = max(row)
        acts = [a for a, x in enumerate(row) if x == best]
        if reps is not None:
            acts = sorted({reps[s][a] for a in acts})
        sets.append(acts)
    return sets


def optimal_policy_set(M: MdpInstance, gamma, *, canonical: bool = True,
                       method: str = "greedy",
                       guard: int = DEFAULT_POLICY_GUARD) -> frozenset:
    """The exact set of gamma-discounted optimal policies.

    ``method="greedy"`` solves once and takes every policy greedy with respect
    to the optimal values; ``method="enumerate"`` evaluates all policies.
    """
    g = check_gamma(gamma)
    if method == "enumerate":
        values = {pi: evaluate_policy(M, pi, g)
                  for pi in enumerate_policies(M, canonical=canonical, guard=guard)}
        best = [max(v[s] for v in values.values()) for s in range(M.n_states)]
        return frozenset(pi for pi, v in values.items() if list(v) == best)
    if method != "greedy":
        raise ValueError(f"unknown method {method!r}")
    v = exact_policy_iteration(M, g).values
    sets = greedy_action_sets(M, v, g, canonical=canonical)
    count = math.prod(len(a) for a in sets)
    if count > guard:
        raise PolicySpaceTooLarge(f"{count} optimal policies exceed the guard {guard}")
    return frozenset(itertools.product(*sets))


def _float_arrays(M: MdpInstance):
    R = np.array([[float(r) for r in row] for row in M.rewards])
    T = np.array([[[float(p) for p in d] for d in b] for b in M.transitions])
    return R, T


def float_value_iteration(M: MdpInstance, gamma: float, tol: float = 1e-10, *,
                          max_iter: int = 10**7) -> SolveResult:
    """Value iteration in floating point.

    Stops once ``gamma * |v_k - v_{k-1}|_inf <= tol``; by contraction the
    Bellman residual of the returned values is then at most ``tol``.
    """
    if not 0 <= gamma < 1:
        raise GammaOutOfRange(f"discount factor {gamma} is not in [0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    R, T = _float_arrays(M)
    v = np.zeros(M.n_states)
    for it in range(1, max_iter + 1):
        q = R + gamma * T @ v
        v_new = q.max(axis=1)
        delta = np.abs(v_new - v).max()
        v = v_new
        if gamma * delta <= tol:
            q = R + gamma * T @ v
            policy = tuple(int(a) for a in q.argmax(axis=1))
            return SolveResult(policy, tuple(float(x) for x in v), gamma, it)
    raise NonConvergence(f"value iteration did not reach tol={tol} in {max_iter} sweeps")
