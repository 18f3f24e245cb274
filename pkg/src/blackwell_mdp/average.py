"""Exact long-run average reward of a fixed policy.

``g = P* r`` with ``P*`` the Cesaro limit of the powers of ``P``. It is
computed from the chain structure: on each closed communicating class the
gain is the stationary expectation of the reward, and transient states
average the gains of the classes they are absorbed into. No discounting is
involved, so this is an independent check of Blackwell-optimal policies.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .model import MdpInstance, Policy, induced_reward_vector, induced_transition_matrix


def _gauss_jordan(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(A)
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


def _reachability(P: Sequence[Sequence[Fraction]]) -> list[set[int]]:
    n = len(P)
    reach = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in range(n):
                if P[u][v] and v not in seen:
                    seen.add(v)
                    stack.append(v)
        reach.append(seen)
    return reach


def recurrent_classes(P: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Closed communicating classes, each sorted, in order of smallest state."""
    reach = _reachability(P)
    classes = []
    assigned: set[int] = set()
    for s in range(len(P)):
        if s in assigned:
            continue
        cls = sorted(t for t in reach[s] if s in reach[t])
        if set(reach[s]) == set(cls):
            classes.append(cls)
            assigned.update(cls)
    return classes


def stationary_distribution(P: Sequence[Sequence[Fraction]], cls: list[int]) -> list[Fraction]:
    """Stationary law of the chain restricted to a closed class."""
    k = len(cls)
    # mu (P_C - I) = 0 with the last equation swapped for sum(mu) = 1
    A = [[P[cls[j]][cls[i]] - (1 if i == j else 0) for j in range(k)] for i in range(k)]
    b = [Fraction(0)] * k
    A[-1] = [Fraction(1)] * k
    b[-1] = Fraction(1)
    return _gauss_jordan(A, b)


def gain(P: Sequence[Sequence[Fraction]], r: Sequence[Fraction]) -> list[Fraction]:
    n = len(P)
    g: list[Fraction | None] = [None] * n
    for cls in recurrent_classes(P):
        mu = stationary_distribution(P, cls)
        value = sum(m * r[s] for m, s in zip(mu, cls))
        for s in cls:
            g[s] = value
    transient = [s for s in range(n) if g[s] is None]
    if transient:
        # (I - Q) g_T = P_{T,R} g_R
        A = [[(1 if i == j else 0) - P[i][j] for j in transient] for i in transient]
        b = [sum(P[i][j] * g[j] for j in range(n) if g[j] is not None)
             for i in transient]
        for s, val in zip(transient, _gauss_jordan(A, b)):
            g[s] = val
    return [Fraction(x) for x in g]


def average_reward(M: MdpInstance, pi: Policy) -> list[Fraction]:
    return gain(induced_transition_matrix(M, pi), induced_reward_vector(M, pi))
