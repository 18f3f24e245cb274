"""Blackwell discount factor, Blackwell-optimal policies and the eta bound.

The exact analysis is a brute force over the breakpoints: every discount
factor where two policies tie at some state is a root of a difference
polynomial. Between consecutive breakpoints the set of optimal policies is
constant, so one rational sample per open interval determines it. At the
breakpoints themselves the optimal set is computed exactly as well, which is
needed to locate the Blackwell discount factor (the optimal set may change
for a single discount factor only).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import polynomial as P
from .errors import GammaOutOfRange
from .exact_linear import ValuePolynomials, check_gamma
from .model import (
    DEFAULT_POLICY_GUARD,
    MdpInstance,
    Policy,
    canonical_policy,
    enumerate_policies,
)
from .roots import (
    IsolatedRoot,
    _count_open,
    _squarefree,
    eta_formula,
    isolate_roots_in_unit_interval,
    largest_root_below_one,
    separate,
    simplest_between,
    sort_unique,
)
from .solvers import exact_policy_iteration

REPORT_WIDTH = Fraction(1, 2**64)


@dataclass(frozen=True)
class IntervalRecord:
    """One open interval ``(lo, hi)`` between consecutive breakpoints.

    Every rational strictly between ``inner_lo`` and ``inner_hi`` lies inside
    the interval; ``sample`` is the simplest such rational.
    """

    lo: IsolatedRoot
    hi: IsolatedRoot
    inner_lo: Fraction
    inner_hi: Fraction
    sample: Fraction
    optimal_set: frozenset


@dataclass(frozen=True)
class BlackwellAnalysis:
    gamma_bar: IsolatedRoot
    breakpoints: tuple
    intervals: tuple
    breakpoint_sets: tuple
    gamma_bw: IsolatedRoot
    blackwell_set: frozenset

    @property
    def optimal_sets_per_interval(self) -> list[frozenset]:
        return [rec.optimal_set for rec in self.intervals]


@dataclass(frozen=True)
class EtaBound:
    N: int
    L: int
    eta: Fraction
    gamma_threshold: Fraction


# ------------------------------------------------------------------ engine

def collect_breakpoints(polys: Iterable[tuple]) -> list[IsolatedRoot]:
    """Sorted distinct roots in ``[0, 1)`` of a family of integer polynomials."""
    seen: set[tuple] = set()
    rational: set[Fraction] = set()
    algebraic: list[IsolatedRoot] = []
    for p in polys:
        p = P.trim(p)
        if len(p) <= 1:
            continue
        q = _squarefree(p)
        if q in seen:
            continue
        seen.add(q)
        for r in isolate_roots_in_unit_interval(q):
            if r.is_exact:
                rational.add(r.lo)
            else:
                algebraic.append(r)
    return sort_unique([IsolatedRoot.exact(x) for x in rational] + algebraic)


def is_root_of(p: tuple, beta: IsolatedRoot) -> bool:
    """Exact test ``p(beta) == 0`` for an isolated algebraic number."""
    p = P.trim(p)
    if not p:
        return True
    if beta.is_exact:
        return P.sign_at(p, beta.lo) == 0
    g = P.gcd(p, beta.poly)
    return len(g) > 1 and _count_open(g, beta.lo, beta.hi) > 0


def _report(root: IsolatedRoot) -> IsolatedRoot:
    return root if root.is_exact else root.refine(REPORT_WIDTH)


def analyze_breakpoints(polys: Iterable[tuple],
                        optimal_set_at: Callable[[Fraction], frozenset],
                        tie_set_at: Callable[[IsolatedRoot, IntervalRecord], frozenset],
                        ) -> BlackwellAnalysis:
    """Shared breakpoint engine for the nominal and robust analyses.

    ``optimal_set_at`` gives the exact optimal set at a rational discount
    factor. ``tie_set_at(beta, right)`` gives it at an irrational breakpoint
    ``beta``, knowing the interval record ``right`` just above it.
    """
    breakpoints = collect_breakpoints(polys)
    zero, one = IsolatedRoot.exact(0), IsolatedRoot.exact(1)
    inner = [b for b in breakpoints if not (b.is_exact and b.lo == 0)]
    ends = [zero] + inner + [one]

    intervals = []
    for a, b in zip(ends, ends[1:]):
        a2, b2 = separate(a, b)
        lo, hi = a2.hi, b2.lo
        sample = simplest_between(lo, hi)
        intervals.append(IntervalRecord(a, b, lo, hi, sample, optimal_set_at(sample)))

    # ends[j] for j = 1..k sits between intervals j-1 and j
    point_sets = []
    for j, beta in enumerate(ends[1:-1], start=1):
        if beta.is_exact:
            point_sets.append(optimal_set_at(beta.lo))
        else:
            point_sets.append(tie_set_at(beta, intervals[j]))
    breakpoint_sets = tuple(
        [optimal_set_at(Fraction(0))] * (len(breakpoints) - len(inner)) + point_sets)

    final = intervals[-1].optimal_set
    j = len(intervals) - 1
    while j >= 1 and point_sets[j - 1] == final and intervals[j - 1].optimal_set == final:
        j -= 1
    gamma_bw = zero if j == 0 else _report(ends[j])
    gamma_bar = _report(breakpoints[-1]) if breakpoints else zero
    return BlackwellAnalysis(gamma_bar, tuple(breakpoints), tuple(intervals),
                             breakpoint_sets, gamma_bw, final)


# ----------------------------------------------------------------- nominal

class _NominalProblem:
    def __init__(self, M: MdpInstance, guard: int):
        self.M = M
        self.policies = list(enumerate_policies(M, canonical=True, guard=guard))
        self.vp = ValuePolynomials(M)
        self._diff: dict = {}

    def difference(self, i: int, j: int, s: int) -> tuple:
        key = (min(i, j), max(i, j), s)
        hit = self._diff.get(key)
        if hit is None:
            hit = self.vp.difference(self.policies[key[0]], self.policies[key[1]], s)
            self._diff[key] = hit
        return hit

    def all_differences(self):
        n = len(self.policies)
        for i in range(n):
            for j in range(i + 1, n):
                for s in range(self.M.n_states):
                    yield self.difference(i, j, s)

    def optimal_set_at(self, gamma: Fraction) -> frozenset:
        values = [self.vp.values(pi, gamma) for pi in self.policies]
        best = [max(v[s] for v in values) for s in range(self.M.n_states)]
        return frozenset(pi for pi, v in zip(self.policies, values) if v == best)

    def tie_set_at(self, beta: IsolatedRoot, right: IntervalRecord) -> frozenset:
        # the smallest policy optimal just above beta is optimal at beta
        index = {pi: k for k, pi in enumerate(self.policies)}
        b = index[min(right.optimal_set)]
        return frozenset(
            pi for k, pi in enumerate(self.policies)
            if all(is_root_of(self.difference(b, k, s), beta)
                   for s in range(self.M.n_states)))


def gamma_pair(M: MdpInstance, pi: Policy, pi2: Policy, s: int) -> IsolatedRoot:
    """Largest discount factor in ``[0, 1)`` where ``pi`` and ``pi2`` tie at ``s``.

    Returns exact 0 when the values coincide identically or never tie.
    """
    vp = ValuePolynomials(M)
    p = vp.difference(tuple(pi), tuple(pi2), s)
    if not p:
        return IsolatedRoot.exact(0)
    root = largest_root_below_one(p)
    return IsolatedRoot.exact(0) if root is None else root


def gamma_bar(M: MdpInstance, *, guard: int = DEFAULT_POLICY_GUARD) -> IsolatedRoot:
    """Largest tie point in ``[0, 1)`` over all policy pairs and states."""
    problem = _NominalProblem(M, guard)
    roots = collect_breakpoints(problem.all_differences())
    return _report(roots[-1]) if roots else IsolatedRoot.exact(0)


def exact_blackwell_analysis(M: MdpInstance, *,
                             guard: int = DEFAULT_POLICY_GUARD) -> BlackwellAnalysis:
    """Exact breakpoint analysis over all canonical deterministic policies."""
    problem = _NominalProblem(M, guard)
    return analyze_breakpoints(problem.all_differences(), problem.optimal_set_at,
                               problem.tie_set_at)


# ------------------------------------------------------------------- bound

def eta_from(n_states: int, m: int, r_inf: int) -> EtaBound:
    N = 2 * n_states - 1
    L = 2 * n_states * r_inf * m ** (2 * n_states) * 4 ** n_states
    # L = 0 only when every reward vanishes; the closed form still applies
    eta = eta_formula(N, L)
    return EtaBound(N, L, eta, 1 - eta)


def eta_bound(M: MdpInstance) -> EtaBound:
    """``eta(M)`` with ``N = 2|S| - 1`` and ``L = 2 |S| r_inf m^(2|S|) 4^|S|``."""
    return eta_from(M.n_states, M.m, M.r_inf)


def blackwell_optimal_policy(M: MdpInstance, method: str = "reduction", *,
                             gamma=None, guard: int = DEFAULT_POLICY_GUARD) -> Policy:
    """A Blackwell-optimal policy.

    ``reduction`` solves the discounted problem exactly at ``1 - eta(M)`` (or
    at a supplied ``gamma`` no smaller than that); ``exact`` returns the
    smallest member of the exact Blackwell set.
    """
    if method == "exact":
        return min(exact_blackwell_analysis(M, guard=guard).blackwell_set)
    if method != "reduction":
        raise ValueError(f"unknown method {method!r}")
    threshold = eta_bound(M).gamma_threshold
    g = threshold if gamma is None else check_gamma(gamma)
    if g < threshold:
        raise GammaOutOfRange(f"gamma {g} is below the threshold 1 - eta(M)")
    return canonical_policy(M, exact_policy_iteration(M, g).policy)
