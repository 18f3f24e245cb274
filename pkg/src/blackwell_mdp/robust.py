"""Robust MDPs with sa-rectangular l1 / l-infinity balls around a nominal kernel.

Each pair ``(s, a)`` has its own set ``U_sa = {p in simplex : |p - P0_sa| <= alpha_sa}``
and the adversary picks one row from each. With ``alpha_sa = beta_sa / m`` the
worst-case rows have denominators dividing ``m`` (l-infinity) or ``2m`` (l1),
so robust values are again ratios of integer polynomials in gamma and the
breakpoint machinery of the nominal case carries over.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polynomial as P
from .blackwell import (
    BlackwellAnalysis,
    EtaBound,
    IntervalRecord,
    analyze_breakpoints,
    eta_from,
    is_root_of,
)
from .errors import (
    DenominatorMismatch,
    GammaOutOfRange,
    NonConvergence,
    ParseError,
    VertexSpaceTooLarge,
)
from .exact_linear import bellman_system, check_gamma, kernel_value_polys, solve_linear
from .model import (
    DEFAULT_POLICY_GUARD,
    MdpInstance,
    Policy,
    action_representatives,
    enumerate_policies,
    format_rational,
    parse_rational,
)
from .roots import IsolatedRoot

NORMS = {"l1": "l1", "ell_1": "l1", "linf": "linf", "ell_inf": "linf"}

DEFAULT_VERTEX_GUARD = 10**5


@dataclass(frozen=True)
class UncertaintySet:
    """Per-(state, action) norm balls; ``radii[s][a]`` times ``m`` is an integer."""

    norm: str
    nominal: tuple
    radii: tuple
    m: int

    def __post_init__(self):
        norm = NORMS.get(self.norm)
        if norm is None:
            raise ParseError(f"unknown norm {self.norm!r}; use 'l1' or 'linf'")
        object.__setattr__(self, "norm", norm)
        radii = tuple(tuple(Fraction(x) for x in row) for row in self.radii)
        object.__setattr__(self, "radii", radii)
        if len(radii) != len(self.nominal) or any(
                len(r) != len(b) for r, b in zip(radii, self.nominal)):
            raise ParseError("radii must have one entry per state-action pair")
        for s, row in enumerate(radii):
            for a, alpha in enumerate(row):
                if alpha < 0:
                    raise ParseError(f"radius ({s},{a}) is negative")
                if (alpha * self.m).denominator != 1:
                    raise DenominatorMismatch(
                        f"radius ({s},{a}) = {alpha} is not a multiple of 1/{self.m}")

    @property
    def scale(self) -> int:
        """Common denominator of every extreme row."""
        return 2 * self.m if self.norm == "l1" else self.m

    def row(self, s: int, a: int) -> tuple:
        return self.nominal[s][a], self.radii[s][a]

    def to_dict(self) -> dict:
        return {"norm": self.norm,
                "radii": [[format_rational(x) for x in row] for row in self.radii]}


def uniform_uncertainty(M: MdpInstance, norm: str, alpha) -> UncertaintySet:
    alpha = Fraction(alpha)
    radii = [[alpha] * M.n_actions for _ in range(M.n_states)]
    return UncertaintySet(norm, M.transitions, radii, M.m)


def load_uncertainty(raw, M: MdpInstance) -> UncertaintySet:
    """Build the set from ``{"norm": ..., "radii": [[...]]}``.

    A single value in place of the matrix applies to every pair.
    """
    if not isinstance(raw, dict) or "norm" not in raw or "radii" not in raw:
        raise ParseError("uncertainty must be an object with 'norm' and 'radii'")
    radii = raw["radii"]
    if isinstance(radii, list):
        if len(radii) != M.n_states or any(
                not isinstance(r, list) or len(r) != M.n_actions for r in radii):
            raise ParseError("radii must be an n_states x n_actions matrix")
        parsed = [[parse_rational(x) for x in row] for row in radii]
    else:
        alpha = parse_rational(radii)
        parsed = [[alpha] * M.n_actions for _ in range(M.n_states)]
    return UncertaintySet(raw["norm"], M.transitions, parsed, M.m)


# ------------------------------------------------------------ inner problems

def _dot(p, v):
    return sum(x * y for x, y in zip(p, v))


def inner_min_ell_inf(p0: Sequence, alpha, v: Sequence) -> tuple[tuple, object]:
    """Minimise ``p . v`` over the simplex within l-infinity distance alpha of p0.

    Mass is pushed to the cheapest states first: walking states by increasing
    value (ties by index), each takes its upper bound ``min(1, p0 + alpha)``
    until the remaining states at their lower bound ``max(0, p0 - alpha)``
    can absorb the rest. The first state where that happens is the pivot and
    takes whatever mass is left.
    """
    n = len(p0)
    order = sorted(range(n), key=lambda i: (v[i], i))
    lb = [max(0, x - alpha) for x in p0]
    ub = [min(1, x + alpha) for x in p0]
    p = list(lb)
    rest_lb = sum(lb)
    above = 0
    for k, i in enumerate(order):
        rest_lb -= lb[i]
        # pivot at position k: upper bounds before it, lower bounds after it
        if above + ub[i] + rest_lb >= 1:
            for j in order[:k]:
                p[j] = ub[j]
            p[i] = 1 - above - rest_lb
            break
        above += ub[i]
    return tuple(p), _dot(p, v)


def _l1_candidates(p0: Sequence, alpha, v: Sequence):
    """Point masses, the two-index basic structures, then the nominal row.

    The nominal row comes last so that ties resolve to an extreme point.
    """
    n = len(p0)
    for j in range(n):
        yield tuple(1 if i == j else 0 for i in range(n))
    half = alpha / 2
    for j1 in range(n):
        others = sorted((i for i in range(n) if i != j1), key=lambda i: (-v[i], i))
        zeroed = 0
        for k, j2 in enumerate(others):
            p = list(p0)
            for i in others[:k]:
                p[i] = 0
            p[j1] = p0[j1] + half
            p[j2] = p0[j2] - half + zeroed
            yield tuple(p)
            zeroed += p0[j2]
    yield tuple(p0)


def _l1_feasible(p, p0, alpha) -> bool:
    return (all(0 <= x <= 1 for x in p) and sum(p) == 1
            and sum(abs(x - y) for x, y in zip(p, p0)) <= alpha)


def inner_min_ell_1(p0: Sequence, alpha, v: Sequence) -> tuple[tuple, object]:
    """Minimise ``p . v`` over the simplex within l1 distance alpha of p0.

    An optimal basic solution adds mass to one state ``j1``, leaves a single
    state ``j2`` partially drained, and keeps every other entry at 0 or at
    its nominal value. Those structures (draining the highest values first)
    and the point masses are enumerated; the first feasible candidate of
    least value is returned.
    """
    best = None
    for p in _l1_candidates(p0, alpha, v):
        if not _l1_feasible(p, p0, alpha):
            continue
        val = _dot(p, v)
        if best is None or val < best[1]:
            best = (p, val)
    return best


def inner_min(U: UncertaintySet, s: int, a: int, v: Sequence) -> tuple[tuple, object]:
    p0, alpha = U.row(s, a)
    if U.norm == "linf":
        return inner_min_ell_inf(p0, alpha, v)
    return inner_min_ell_1(p0, alpha, v)


# ------------------------------------------------------- vertex enumeration

def linf_vertices(p0: Sequence, alpha) -> list[tuple]:
    """Vertices of the simplex intersected with the box ``|p - p0| <= alpha``.

    At a vertex all but at most one coordinate sit at a box bound.
    """
    n = len(p0)
    lb = [max(Fraction(0), x - alpha) for x in p0]
    ub = [min(Fraction(1), x + alpha) for x in p0]
    out = set()
    for free in range(n):
        rest = [i for i in range(n) if i != free]
        for choice in itertools.product((0, 1), repeat=n - 1):
            p = [Fraction(0)] * n
            for i, c in zip(rest, choice):
                p[i] = ub[i] if c else lb[i]
            p[free] = 1 - sum(p)
            if lb[free] <= p[free] <= ub[free]:
                out.add(tuple(p))
    return sorted(out)


def _solve_square(A, b):
    try:
        return solve_linear(A, b)
    except ZeroDivisionError:
        return None


def l1_vertices(p0: Sequence, alpha) -> list[tuple]:
    """Vertices of ``{p >= 0, sum p = 1, |p - p0|_1 <= alpha}``.

    The l1 ball is written as the ``2^n`` half-spaces ``sigma . (p - p0) <= alpha``;
    every choice of ``n - 1`` active constraints together with ``sum p = 1`` is
    solved and kept if feasible.
    """
    n = len(p0)
    p0 = [Fraction(x) for x in p0]
    alpha = Fraction(alpha)
    cons = []
    for i in range(n):
        cons.append(([1 if j == i else 0 for j in range(n)], Fraction(0)))
    for sigma in itertools.product((1, -1), repeat=n):
        cons.append(([-x for x in sigma], -alpha - _dot(sigma, p0)))
    # constraint rows read ``row . p >= rhs``
    out = set()
    for active in itertools.combinations(range(len(cons)), n - 1):
        A = [cons[k][0] for k in active] + [[1] * n]
        b = [cons[k][1] for k in active] + [Fraction(1)]
        p = _solve_square(A, b)
        if p is None:
            continue
        if all(x >= 0 for x in p) and sum(abs(x - y) for x, y in zip(p, p0)) <= alpha:
            out.add(tuple(p))
    return sorted(out)


def extreme_rows(U: UncertaintySet, s: int, a: int) -> list[tuple]:
    p0, alpha = U.row(s, a)
    if U.norm == "linf":
        return linf_vertices(p0, alpha)
    return l1_vertices(p0, alpha)


def vertex_minimum(vertices: Sequence[tuple], v: Sequence):
    return min(_dot(p, v) for p in vertices)


# ------------------------------------------------------------ robust solvers

@dataclass(frozen=True)
class RobustSolveResult:
    policy: Policy
    worst_case_values: tuple
    worst_case_kernel: tuple
    iterations: int


def robust_representatives(M: MdpInstance, U: UncertaintySet) -> list[list[int]]:
    return action_representatives(M, extra=U.radii)


def _solve_kernel(rewards, kernel, gamma):
    A, b = bellman_system(kernel, rewards, gamma)
    return solve_linear(A, b)


def robust_evaluate(M: MdpInstance, U: UncertaintySet, pi: Policy, gamma,
                    kernel=None) -> tuple[list[Fraction], list[tuple]]:
    """Exact worst-case values of ``pi`` and one minimising kernel.

    The adversary runs policy iteration over rows: a row is replaced only
    when the inner minimum is strictly smaller than its current value. The
    returned kernel consists of extreme rows.
    """
    g = check_gamma(gamma)
    rewards = [M.rewards[s][a] for s, a in enumerate(pi)]
    if kernel is None:
        kernel = [tuple(M.transitions[s][a]) for s, a in enumerate(pi)]
    kernel = list(kernel)
    while True:
        v = _solve_kernel(rewards, kernel, g)
        best = [inner_min(U, s, a, v) for s, a in enumerate(pi)]
        changed = False
        for s, (p, val) in enumerate(best):
            if val < _dot(kernel[s], v):
                kernel[s] = p
                changed = True
        if not changed:
            # tied rows are swapped for the extreme minimiser; v is unchanged
            return v, [p for p, _ in best]


def robust_q_values(M: MdpInstance, U: UncertaintySet, v, gamma):
    q, rows = [], []
    for s in range(M.n_states):
        qs, rs = [], []
        for a in range(M.n_actions):
            p, val = inner_min(U, s, a, v)
            qs.append(M.rewards[s][a] + gamma * val)
            rs.append(p)
        q.append(qs)
        rows.append(tuple(rs))
    return q, tuple(rows)


def robust_policy_iteration(M: MdpInstance, U: UncertaintySet, gamma, *,
                            initial: Policy | None = None) -> RobustSolveResult:
    g = check_gamma(gamma)
    pi = tuple(initial) if initial is not None else (0,) * M.n_states
    kernel = None
    iterations = 0
    while True:
        iterations += 1
        v, kernel = robust_evaluate(M, U, pi, g, kernel)
        q, rows = robust_q_values(M, U, v, g)
        new = list(pi)
        for s, row in enumerate(q):
            best = max(row)
            if row[pi[s]] != best:
                new[s] = row.index(best)
        if tuple(new) == pi:
            return RobustSolveResult(pi, tuple(v), rows, iterations)
        pi = tuple(new)
        kernel = [rows[s][a] for s, a in enumerate(pi)]


def _l1_greedy_float(p0, alpha, v):
    order = sorted(range(len(p0)), key=lambda i: (v[i], i))
    p = list(p0)
    j = order[0]
    delta = min(alpha / 2, 1 - p[j])
    p[j] += delta
    for i in reversed(order[1:]):
        take = min(delta, p[i])
        p[i] -= take
        delta -= take
        if delta <= 0:
            break
    return p


def _robust_float_vi(M, U, gamma, tol, max_iter):
    P0 = [[[float(x) for x in row] for row in block] for block in M.transitions]
    R = [[float(r) for r in row] for row in M.rewards]
    A = [[float(x) for x in row] for row in U.radii]
    n = M.n_states
    v = [0.0] * n
    for it in range(1, max_iter + 1):
        q = []
        for s in range(n):
            qs = []
            for a in range(M.n_actions):
                if U.norm == "linf":
                    p, val = inner_min_ell_inf(P0[s][a], A[s][a], v)
                else:
                    p = _l1_greedy_float(P0[s][a], A[s][a], v)
                    val = _dot(p, v)
                qs.append(R[s][a] + gamma * val)
            q.append(qs)
        v_new = [max(qs) for qs in q]
        delta = max(abs(x - y) for x, y in zip(v_new, v))
        v = v_new
        if gamma * delta <= tol:
            policy = tuple(qs.index(max(qs)) for qs in q)
            return v, policy, it
    raise NonConvergence(f"robust value iteration did not reach tol={tol} "
                         f"in {max_iter} sweeps")


def robust_value_iteration(M: MdpInstance, U: UncertaintySet, gamma, *,
                           exact: bool = True, tol: float = 1e-10,
                           max_iter: int = 10**6) -> RobustSolveResult:
    """Robust optimal policy and worst-case values.

    The exact path is robust policy iteration with an exact inner adversary;
    the float path is plain robust value iteration.
    """
    if exact:
        return robust_policy_iteration(M, U, gamma)
    g = float(gamma)
    if not 0 <= g < 1:
        raise GammaOutOfRange(f"discount factor {gamma} is not in [0, 1)")
    v, policy, it = _robust_float_vi(M, U, g, tol, max_iter)
    rows = []
    for s in range(M.n_states):
        rs = []
        for a in range(M.n_actions):
            p0 = [float(x) for x in M.transitions[s][a]]
            alpha = float(U.radii[s][a])
            if U.norm == "linf":
                rs.append(inner_min_ell_inf(p0, alpha, v)[0])
            else:
                rs.append(tuple(_l1_greedy_float(p0, alpha, v)))
        rows.append(tuple(rs))
    return RobustSolveResult(policy, tuple(v), tuple(rows), it)


def robust_optimal_policy_set(M: MdpInstance, U: UncertaintySet, gamma) -> frozenset:
    """Canonical policies greedy with respect to the robust optimal values."""
    g = check_gamma(gamma)
    res = robust_policy_iteration(M, U, g)
    q, _ = robust_q_values(M, U, res.worst_case_values, g)
    reps = robust_representatives(M, U)
    sets = []
    for s, row in enumerate(q):
        best = max(row)
        sets.append(sorted({reps[s][a] for a, x in enumerate(row) if x == best}))
    return frozenset(itertools.product(*sets))


def robust_eta_bound(M: MdpInstance, U: UncertaintySet) -> EtaBound:
    """``eta`` with ``m`` replaced by the extreme-row denominator.

    For l1 balls rows have denominator ``2m``; rewards are then expressed
    over ``2m`` as well, which doubles ``r_inf``.
    """
    factor = U.scale // M.m
    return eta_from(M.n_states, U.scale, M.r_inf * factor)


# --------------------------------------------------- robust breakpoint analysis

class _RobustProblem:
    def __init__(self, M: MdpInstance, U: UncertaintySet, guard: int,
                 vertex_guard: int):
        self.M, self.U = M, U
        self.reps = robust_representatives(M, U)
        self.policies = list(enumerate_policies(M, canonical=True, guard=guard,
                                                reps=self.reps))
        self.vertices = {}
        for s in range(M.n_states):
            for a in sorted(set(self.reps[s])):
                self.vertices[s, a] = extreme_rows(U, s, a)
        total = sum(math.prod(len(self.vertices[s, a]) for s, a in enumerate(pi))
                    for pi in self.policies)
        if total > vertex_guard:
            raise VertexSpaceTooLarge(
                f"{total} policy/extreme-kernel combinations exceed the guard "
                f"{vertex_guard}")
        self._polys: dict = {}

    def polys(self, pi: Policy, kernel) -> tuple[list[tuple], tuple]:
        key = (pi, tuple(kernel))
        hit = self._polys.get(key)
        if hit is None:
            rewards = [self.M.rewards[s][a] for s, a in enumerate(pi)]
            hit = kernel_value_polys(rewards, kernel, self.U.scale)
            self._polys[key] = hit
        return hit

    def combos(self):
        for pi in self.policies:
            rows = [self.vertices[s, a] for s, a in enumerate(pi)]
            for kernel in itertools.product(*rows):
                yield pi, kernel

    def all_differences(self):
        combos = [self.polys(pi, k) for pi, k in self.combos()]
        for i in range(len(combos)):
            n1, d1 = combos[i]
            for j in range(i + 1, len(combos)):
                n2, d2 = combos[j]
                for s in range(self.M.n_states):
                    yield P.sub(P.mul(n1[s], d2), P.mul(n2[s], d1))

    def optimal_set_at(self, gamma: Fraction) -> frozenset:
        return robust_optimal_policy_set(self.M, self.U, gamma)

    def tie_set_at(self, beta: IsolatedRoot, right: IntervalRecord) -> frozenset:
        # worst kernels are constant on the open interval above beta, so the
        # robust values at beta are those of the worst kernels at the sample
        g = right.sample
        kernels = {pi: robust_evaluate(self.M, self.U, pi, g)[1] for pi in self.policies}
        b = min(right.optimal_set)
        nb, db = self.polys(b, kernels[b])
        out = []
        for pi in self.policies:
            n, d = self.polys(pi, kernels[pi])
            if all(is_root_of(P.sub(P.mul(n[s], db), P.mul(nb[s], d)), beta)
                   for s in range(self.M.n_states)):
                out.append(pi)
        return frozenset(out)


def robust_blackwell_analysis(M: MdpInstance, U: UncertaintySet, *,
                              guard: int = DEFAULT_POLICY_GUARD,
                              vertex_guard: int = DEFAULT_VERTEX_GUARD
                              ) -> BlackwellAnalysis:
    """Breakpoint analysis over every policy paired with every extreme kernel."""
    problem = _RobustProblem(M, U, guard, vertex_guard)
    return analyze_breakpoints(problem.all_differences(), problem.optimal_set_at,
                               problem.tie_set_at)
