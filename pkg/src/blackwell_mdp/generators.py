"""Worked instances and random test instances.

Action menus have uniform width. States with fewer meaningful choices repeat
their real action in the spare slots; repeated actions are identical in
reward and transitions, so they collapse under policy canonicalisation and do
not change any analysis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NonMonotoneBreakpoints, NonOddN
from .model import MdpInstance, make_instance


def _point_mass(n: int, target: int) -> list[int]:
    row = [0] * n
    row[target] = 1
    return row


def chain_instance(menus: Sequence[Sequence[tuple]], n_actions: int | None = None,
                   m: int | None = None) -> MdpInstance:
    """Deterministic instance from per-state menus of ``(reward, next_state)``."""
    n = len(menus)
    width = n_actions or max(len(menu) for menu in menus)
    rewards, transitions = [], []
    for menu in menus:
        padded = list(menu) + [menu[-1]] * (width - len(menu))
        rewards.append([Fraction(r) for r, _ in padded])
        transitions.append([_point_mass(n, nxt) for _, nxt in padded])
    return make_instance(rewards, transitions, m)


def example_one() -> MdpInstance:
    """Eight-state instance with three actions at state 0.

    ``a1`` (action 0) earns 1 and jumps to the absorbing state 7. ``a2``
    (action 1) earns 0 and walks 1 -> 2 -> 3 -> 7 collecting 6 and -8;
    ``a3`` (action 2) earns 0 and walks 4 -> 5 -> 6 -> 7 collecting 8/3 and
    -16/9. Value at state 0: ``1``, ``6g - 8g^2`` and ``8g/3 - 16g^2/9``.
    """
    menus = [
        [(1, 7), (0, 1), (0, 4)],
        [(6, 2)],
        [(-8, 3)],
        [(0, 7)],
        [(Fraction(8, 3), 5)],
        [(Fraction(-16, 9), 6)],
        [(0, 7)],
        [(0, 7)],
    ]
    return chain_instance(menus, n_actions=3)


@dataclass(frozen=True)
class IntervalSpec:
    """Breakpoints ``0 = g_0 < g_1 < ... < g_N = 1`` with ``N`` odd."""

    breakpoints: tuple

    def __post_init__(self):
        pts = tuple(Fraction(x) for x in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if len(pts) < 2 or pts[0] != 0 or pts[-1] != 1:
            raise NonMonotoneBreakpoints("breakpoints must start at 0 and end at 1")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise NonMonotoneBreakpoints("breakpoints must be strictly increasing")
        if (len(pts) - 1) % 2 == 0:
            raise NonOddN(f"N = {len(pts) - 1} must be odd")

    @property
    def N(self) -> int:
        return len(self.breakpoints) - 1


def lagrange_coefficients(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients of the interpolating polynomial (product form)."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            # multiply basis by (x - xs[j])
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k] -= c * xs[j]
                nxt[k + 1] += c
            basis = nxt
            denom *= xs[i] - xs[j]
        w = ys[i] / denom
        for k, c in enumerate(basis):
            coeffs[k] += w * c
    return coeffs


FIRST_NODE_VALUE = Fraction(9, 10)


def interval_rewards(spec: IntervalSpec) -> list[Fraction]:
    """Rewards ``r_0..r_{N-1}`` of the a2 chain.

    The a2 value ``sum r_t g^t`` is 9/10 at ``g = 0`` and exactly 1 at every
    interior breakpoint.
    """
    xs = list(spec.breakpoints[:-1])
    ys = [FIRST_NODE_VALUE] + [Fraction(1)] * (len(xs) - 1)
    return lagrange_coefficients(xs, ys)


def interval_instance(spec: IntervalSpec | Sequence) -> MdpInstance:
    """Two-action chain whose optimal action alternates across the breakpoints.

    State 0 offers ``a1`` (reward 1, jump to the absorbing state N) and ``a2``
    (reward r_0, move to state 1); states 1..N-1 pay r_t and advance.
    """
    if not isinstance(spec, IntervalSpec):
        spec = IntervalSpec(tuple(spec))
    N = spec.N
    r = interval_rewards(spec)
    menus = [[(1, N), (r[0], 1)]]
    for t in range(1, N):
        menus.append([(r[t], t + 1)])
    menus.append([(0, N)])
    return chain_instance(menus, n_actions=2)


def random_composition(rng: random.Random, total: int, parts: int) -> list[int]:
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def random_instance(n_states: int, n_actions: int, m: int, r_max: int,
                    seed: int) -> MdpInstance:
    """Random rational MDP with transition entries ``k/m`` and rewards ``q/m``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = random.Random(seed)
    transitions = []
    rewards = []
    for _ in range(n_states):
        block = []
        for _ in range(n_actions):
            comp = random_composition(rng, m, n_states)
            rng.shuffle(comp)
            block.append([Fraction(k, m) for k in comp])
        transitions.append(block)
        rewards.append([Fraction(rng.randint(-r_max, r_max), m)
                        for _ in range(n_actions)])
    return make_instance(rewards, transitions, m)
