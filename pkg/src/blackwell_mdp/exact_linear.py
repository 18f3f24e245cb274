"""Value functions of fixed policies as exact rational functions of gamma.

For a policy ``pi`` the discounted value at state ``s`` is
``n(gamma, s, pi) / d(gamma, pi)`` where ``d = det(I - gamma P_pi)`` and ``n``
is the determinant of ``I - gamma P_pi`` with column ``s`` replaced by the
reward vector ``r_pi``.

Determinants are taken symbolically in Z[gamma] by Bareiss elimination on
``m * (I - gamma P_pi)``, whose entries are integer polynomials of degree at
most one. The results are therefore ``m^|S| d`` and ``m^|S| n``, both with
integer coefficients; dividing by ``m^|S|`` gives the rational polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polynomial as P
from .errors import GammaOutOfRange
from .model import MdpInstance, Policy, induced_reward_vector, induced_transition_matrix
from .polynomial import IntegerPoly, RationalPoly


def check_gamma(gamma) -> Fraction:
    g = Fraction(gamma)
    if not 0 <= g < 1:
        raise GammaOutOfRange(f"discount factor {g} is not in [0, 1)")
    return g


def bareiss_det(matrix: Sequence[Sequence[tuple]]) -> tuple:
    """Determinant of a square matrix over Z[x] (entries are coefficient tuples).

    Fraction-free: every intermediate division is exact in Z[x]. Rows are
    swapped when a pivot vanishes identically.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return (1,)
    sign = 1
    prev: tuple = (1,)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ()
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                num = P.sub(P.mul(pivot, row_i[j]), P.mul(aik, row_k[j]))
                row_i[j] = P.exact_div(num, prev) if prev != (1,) else num
        prev = pivot
    det = a[n - 1][n - 1]
    return P.neg(det) if sign < 0 else det


def _scaled_system(M: MdpInstance, pi: Policy) -> list[list[tuple]]:
    """Entries of ``m (I - gamma P_pi)`` as integer polynomials in gamma."""
    m = M.m
    rows = []
    for s, a in enumerate(pi):
        row = []
        for s2 in range(M.n_states):
            const = m if s == s2 else 0
            lin = -M.scaled_transition(s, a, s2)
            row.append(P.trim((const, lin)))
        rows.append(row)
    return rows


def scaled_denominator(M: MdpInstance, pi: Policy) -> tuple:
    """Integer coefficients of ``m^|S| d(gamma, pi)``."""
    return bareiss_det(_scaled_system(M, pi))


def scaled_numerator(M: MdpInstance, pi: Policy, s: int) -> tuple:
    """Integer coefficients of ``m^|S| n(gamma, s, pi)``."""
    rows = _scaled_system(M, pi)
    for i, a in enumerate(pi):
        rows[i][s] = P.trim((M.scaled_reward(i, a),))
    return bareiss_det(rows)


def denominator_poly(M: MdpInstance, pi: Policy) -> RationalPoly:
    """``d(gamma, pi) = det(I - gamma P_pi)``; equals 1 at gamma = 0."""
    scale = M.m ** M.n_states
    return IntegerPoly(scaled_denominator(M, pi)).to_rational(scale)


def numerator_poly(M: MdpInstance, pi: Policy, s: int) -> RationalPoly:
    scale = M.m ** M.n_states
    return IntegerPoly(scaled_numerator(M, pi, s)).to_rational(scale)


@dataclass(frozen=True)
class ValueFunctionRational:
    numerator: RationalPoly
    denominator: RationalPoly
    state: int
    policy: Policy

    def __call__(self, gamma) -> Fraction:
        g = check_gamma(gamma)
        return self.numerator(g) / self.denominator(g)


def value_function(M: MdpInstance, pi: Policy, s: int) -> ValueFunctionRational:
    return ValueFunctionRational(numerator_poly(M, pi, s),
                                 denominator_poly(M, pi), s, tuple(pi))


def value_at(M: MdpInstance, pi: Policy, s: int, gamma) -> Fraction:
    """Exact discounted value ``v^pi_{gamma,s}`` via the Cramer form."""
    g = check_gamma(gamma)
    num = P.evaluate(scaled_numerator(M, pi, s), g)
    den = P.evaluate(scaled_denominator(M, pi), g)
    return Fraction(num) / den


def solve_linear(A: Sequence[Sequence[Fraction]],
                 b: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``A x = b`` exactly by fraction-free (Bareiss) elimination.

    Rows are first cleared of denominators, the augmented integer system is
    triangularised with exact integer divisions, then back-substituted.
    """
    n = len(A)
    aug = []
    for row, rhs in zip(A, b):
        entries = [Fraction(x) for x in row] + [Fraction(rhs)]
        lcm = math.lcm(*(x.denominator for x in entries))
        aug.append([int(x * lcm) for x in entries])
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            for i in range(k + 1, n):
                if aug[i][k]:
                    aug[k], aug[i] = aug[i], aug[k]
                    break
            else:
                raise ZeroDivisionError("singular linear system")
        pivot = aug[k][k]
        for i in range(k + 1, n):
            aik = aug[i][k]
            row_i, row_k = aug[i], aug[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(aug[i][n])
        for j in range(i + 1, n):
            acc -= aug[i][j] * x[j]
        x[i] = acc / aug[i][i]
    return x


def bellman_system(transitions, rewards, gamma):
    """``(I - gamma P, r)`` for a fixed transition matrix and reward vector."""
    n = len(rewards)
    A = [[(1 if i == j else 0) - gamma * transitions[i][j] for j in range(n)]
         for i in range(n)]
    return A, list(rewards)


def evaluate_policy(M: MdpInstance, pi: Policy, gamma) -> list[Fraction]:
    """Exact value vector from solving ``(I - gamma P_pi) v = r_pi`` directly."""
    g = check_gamma(gamma)
    A, b = bellman_system(induced_transition_matrix(M, pi),
                          induced_reward_vector(M, pi), g)
    return solve_linear(A, b)


def difference_poly(M: MdpInstance, pi: Policy, pi2: Policy, s: int) -> RationalPoly:
    """``p = n(., s, pi) d(., pi2) - n(., s, pi2) d(., pi)``; vanishes at 1."""
    scale = M.m ** (2 * M.n_states)
    return IntegerPoly(scaled_difference(M, pi, pi2, s)).to_rational(scale)


def scaled_difference(M: MdpInstance, pi: Policy, pi2: Policy, s: int) -> tuple:
    """Integer coefficients of ``m^(2|S|) p`` computed without fractions."""
    return P.sub(P.mul(scaled_numerator(M, pi, s), scaled_denominator(M, pi2)),
                 P.mul(scaled_numerator(M, pi2, s), scaled_denominator(M, pi)))


def scaled_integer_poly(M: MdpInstance, p: RationalPoly) -> IntegerPoly:
    """``m^(2|S|) p`` as an IntegerPoly (NonIntegralCoefficient if not integral)."""
    return p.to_integer(M.m ** (2 * M.n_states))


class ValuePolynomials:
    """Per-instance cache of the scaled numerator/denominator polynomials.

    ``get(pi)`` returns ``(numerators, denominator)`` where ``numerators[s]``
    is ``m^|S| n(., s, pi)`` and ``denominator`` is ``m^|S| d(., pi)``.
    """

    def __init__(self, M: MdpInstance):
        self.M = M
        self._cache: dict = {}

    def get(self, pi: Policy) -> tuple[list[tuple], tuple]:
        key = tuple(pi)
        hit = self._cache.get(key)
        if hit is None:
            hit = ([scaled_numerator(self.M, key, s) for s in range(self.M.n_states)],
                   scaled_denominator(self.M, key))
            self._cache[key] = hit
        return hit

    def difference(self, pi: Policy, pi2: Policy, s: int) -> tuple:
        n1, d1 = self.get(pi)
        n2, d2 = self.get(pi2)
        return P.sub(P.mul(n1[s], d2), P.mul(n2[s], d1))

    def values(self, pi: Policy, gamma: Fraction) -> list[Fraction]:
        nums, den = self.get(pi)
        d = P.evaluate(den, gamma)
        return [Fraction(P.evaluate(n, gamma)) / d for n in nums]


def kernel_value_polys(rewards_pi: Sequence[Fraction],
                       kernel: Sequence[Sequence[Fraction]],
                       m: int) -> tuple[list[tuple], tuple]:
    """Scaled numerator/denominator polynomials for an arbitrary kernel.

    ``m`` must clear every denominator of ``kernel`` and ``rewards_pi``; the
    results are ``m^n`` times the true polynomials.
    """
    n = len(rewards_pi)
    base = []
    for i in range(n):
        row = []
        for j in range(n):
            const = m if i == j else 0
            lin = -kernel[i][j] * m
            if lin.denominator != 1:
                raise ValueError("m does not clear the kernel denominators")
            row.append(P.trim((const, int(lin))))
        base.append(row)
    den = bareiss_det(base)
    nums = []
    q = []
    for r in rewards_pi:
        v = r * m
        if v.denominator != 1:
            raise ValueError("m does not clear the reward denominators")
        q.append(int(v))
    for s in range(n):
        rows = [list(r) for r in base]
        for i in range(n):
            rows[i][s] = P.trim((q[i],))
        nums.append(bareiss_det(rows))
    return nums, den
