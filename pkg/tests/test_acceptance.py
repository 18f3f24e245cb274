"""Acceptance gate: ten criteria, each reported as one PASS/FAIL line."""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction

import pytest

from blackwell_mdp import polynomial as P
from blackwell_mdp.average import average_reward
from blackwell_mdp.blackwell import (
    eta_bound,
    exact_blackwell_analysis,
    gamma_pair,
)
from blackwell_mdp.exact_linear import ValuePolynomials
from blackwell_mdp.generators import (
    example_one,
    interval_instance,
    random_composition,
    random_instance,
)
from blackwell_mdp.model import (
    canonical_policy,
    enumerate_policies,
    induced_reward_vector,
    induced_transition_matrix,
)
from blackwell_mdp.robust import (
    inner_min_ell_1,
    inner_min_ell_inf,
    l1_vertices,
    linf_vertices,
    robust_blackwell_analysis,
    robust_eta_bound,
    uniform_uncertainty,
    vertex_minimum,
)
from blackwell_mdp.roots import (
    IsolatedRoot,
    compare_roots,
    gap_exceeds,
    isolate_roots,
    rump_eta,
)
from blackwell_mdp.solvers import exact_policy_iteration, optimal_policy_set

from .conftest import A1, A2, A3, FIFTHS

F = Fraction


def corpus(count, *, max_states, max_actions, max_m, r_max, seed):
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(1, max_states)
        a = rng.randint(1, max_actions)
        m = rng.randint(1, max_m)
        out.append(random_instance(n, a, m, r_max, seed=seed * 1_000_003 + k))
    return out


def report(log, k, ok, detail):
    line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'} - {detail}"
    log[k] = line
    print(line)
    assert ok, line


# -------------------------------------------------------------- oracles

def leibniz_poly_det(A):
    """Determinant over Q[g] by the permutation expansion."""
    n = len(A)
    total: tuple = ()
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term: tuple = (F(-1) if inv % 2 else F(1),)
        for i, j in enumerate(perm):
            term = P.mul(term, A[i][j])
            if not term:
                break
        total = P.add(total, term)
    return total


def rational_value_polys(M, pi):
    """``(n(., s), d)`` over Q[g] by Cramer's rule, independent of the scaled path."""
    Pm = induced_transition_matrix(M, pi)
    r = induced_reward_vector(M, pi)
    n = M.n_states
    base = [[P.trim(((1 if i == j else 0), -Pm[i][j])) for j in range(n)] for i in range(n)]
    d = leibniz_poly_det(base)
    nums = []
    for s in range(n):
        A = [list(row) for row in base]
        for i in range(n):
            A[i][s] = P.trim((r[i],))
        nums.append(leibniz_poly_det(A))
    return nums, d


CORPUS_34 = corpus(500, max_states=4, max_actions=3, max_m=5, r_max=5, seed=3)
CORPUS_56 = corpus(200, max_states=3, max_actions=3, max_m=4, r_max=5, seed=5)
CORPUS_7 = corpus(100, max_states=3, max_actions=3, max_m=3, r_max=4, seed=7)
CORPUS_8 = corpus(100, max_states=3, max_actions=3, max_m=4, r_max=5, seed=8)


# ------------------------------------------------------------ criteria

def test_criterion_01_example_one(acceptance_log):
    start = time.perf_counter()
    M = example_one()
    A = exact_blackwell_analysis(M)
    checks = {
        "gamma_bw = 3/4": A.gamma_bw.value == F(3, 4),
        "gamma(a1,a2,0) = 1/2": gamma_pair(M, A1, A2, 0).value == F(1, 2),
        "Blackwell set = {a1}": A.blackwell_set == {A1},
        "a3 optimal at 3/4": A3 in optimal_policy_set(M, F(3, 4)),
    }
    # literal clause: a3 optimal on (1/2, 3/4), checked at interval samples
    samples = [rec.sample for rec in A.intervals
               if rec.sample > F(1, 2) and rec.sample < F(3, 4)]
    samples.append((F(1, 2) + F(3, 4)) / 2)
    checks["a3 optimal on (1/2,3/4)"] = all(
        A3 in optimal_policy_set(M, g) for g in samples)
    elapsed = time.perf_counter() - start
    checks["runtime < 1 s"] = elapsed < 1
    failed = [k for k, v in checks.items() if not v]
    detail = ("three-action instance: " + ", ".join(checks) if not failed
              else "three-action instance: failed " + "; ".join(failed)
              + f" (passed: {', '.join(k for k in checks if checks[k])})")
    report(acceptance_log, 1, not failed, detail)


def test_criterion_02_example_two(acceptance_log):
    start = time.perf_counter()
    M = interval_instance(FIFTHS)
    a1, a2 = (0,) * 6, (1,) + (0,) * 5
    vp = ValuePolynomials(M)
    q = vp.difference(a1, a2, 0)
    roots = isolate_roots(q, 0, 1)
    A = exact_blackwell_analysis(M)
    checks = {
        "roots exactly 1/5..4/5": [r.value for r in roots] == [F(k, 5) for k in range(1, 5)],
        "alternating sets": A.optimal_sets_per_interval == [{a1}, {a2}, {a1}, {a2}, {a1}],
        "a1 uniquely optimal on (4/5,1)": (A.intervals[-1].optimal_set == {a1}
                                           and A.intervals[-1].lo.value == F(4, 5)),
    }
    checks["runtime < 1 s"] = time.perf_counter() - start < 1
    failed = [k for k, v in checks.items() if not v]
    report(acceptance_log, 2, not failed,
           "fifths interval instance: " + (", ".join(checks) if not failed else "failed " + "; ".join(failed)))


def test_criterion_03_denominator_and_difference_properties(acceptance_log):
    rng = random.Random(33)
    failures = pairs = 0
    for M in CORPUS_34:
        vp = ValuePolynomials(M)
        policies = list(enumerate_policies(M))
        for pi in policies:
            nums, den = vp.get(pi)
            if P.evaluate(den, F(1)) != 0:
                failures += 1
            for _ in range(10):
                g = F(rng.randrange(0, 1000), 1000)
                if P.evaluate(den, g) <= 0:
                    failures += 1
        for pi, pi2 in itertools.combinations(policies, 2):
            for s in range(M.n_states):
                pairs += 1
                if P.evaluate(vp.difference(pi, pi2, s), F(1)) != 0:
                    failures += 1
    report(acceptance_log, 3, failures == 0,
           f"{len(CORPUS_34)} instances, {pairs} (pair, state) differences: "
           f"d>0 on [0,1), d(1)=0, p(1)=0; {failures} failures")


def test_criterion_04_integrality_and_coefficient_bound(acceptance_log):
    failures = checked = 0
    for M in CORPUS_34:
        S = M.n_states
        scale = M.m ** (2 * S)
        L = 2 * S * M.r_inf * scale * 4 ** S
        polys = {pi: rational_value_polys(M, pi) for pi in enumerate_policies(M)}
        for (pi, (n1, d1)), (pi2, (n2, d2)) in itertools.combinations(polys.items(), 2):
            for s in range(S):
                checked += 1
                p = P.sub(P.mul(n1[s], d2), P.mul(n2[s], d1))
                scaled = [c * scale for c in p]
                if any(c.denominator != 1 for c in scaled):
                    failures += 1
                    continue
                if sum(abs(c) for c in scaled) > L:
                    failures += 1
    report(acceptance_log, 4, failures == 0,
           f"{checked} difference polynomials rebuilt by cofactor expansion: "
           f"m^(2|S|) p integral and |coeffs|_1 <= L; {failures} failures")


def test_criterion_05_bound_validity(acceptance_log):
    violations = 0
    for M in CORPUS_56:
        A = exact_blackwell_analysis(M)
        t = IsolatedRoot.exact(eta_bound(M).gamma_threshold)
        if compare_roots(A.gamma_bw, t) >= 0:
            violations += 1
    report(acceptance_log, 5, violations == 0,
           f"{len(CORPUS_56)} instances: gamma_bw < 1 - eta(M) strictly; "
           f"{violations} violations")


def cauchy_bound(p) -> Fraction:
    lead = abs(p[-1])
    return 1 + max(F(abs(c), lead) for c in p[:-1])


def test_criterion_06_root_separation(acceptance_log):
    violations = checked = gaps = 0
    seen = set()
    for M in CORPUS_56:
        vp = ValuePolynomials(M)
        policies = list(enumerate_policies(M, canonical=True))
        for pi, pi2 in itertools.combinations(policies, 2):
            for s in range(M.n_states):
                p = P.trim(vp.difference(pi, pi2, s))
                if len(p) < 2 or p in seen:
                    continue
                seen.add(p)
                checked += 1
                eta = rump_eta(P.degree(p), P.l1_norm(p)).eta
                B = cauchy_bound(p)
                roots = isolate_roots(p, -B, B, include_hi=True)
                for a, b in zip(roots, roots[1:]):
                    gaps += 1
                    if not gap_exceeds(a, b, eta):
                        violations += 1
    report(acceptance_log, 6, violations == 0,
           f"{checked} distinct difference polynomials, {gaps} gaps between "
           f"consecutive real roots (root at 1 included) exceed rump_eta(N, L); "
           f"{violations} violations")


def test_criterion_07_reduction(acceptance_log):
    failures = 0
    for M in CORPUS_7:
        assert M.r_inf <= 4 and M.m <= 3 and M.n_states <= 3
        A = exact_blackwell_analysis(M)
        g = eta_bound(M).gamma_threshold
        res = exact_policy_iteration(M, g)
        if canonical_policy(M, res.policy) not in A.blackwell_set:
            failures += 1
    report(acceptance_log, 7, failures == 0,
           f"{len(CORPUS_7)} instances: exact policy iteration at 1 - eta(M) lands "
           f"in the Blackwell set; {failures} failures")


def test_criterion_08_average_optimality(acceptance_log):
    failures = 0
    for M in CORPUS_8:
        A = exact_blackwell_analysis(M)
        gains = {pi: average_reward(M, pi) for pi in enumerate_policies(M)}
        best = [max(g[s] for g in gains.values()) for s in range(M.n_states)]
        for pi in A.blackwell_set:
            if gains[pi] != best:
                failures += 1
    report(acceptance_log, 8, failures == 0,
           f"{len(CORPUS_8)} instances: Blackwell policies have maximal Cesaro "
           f"average reward; {failures} failures")


def test_criterion_09_inner_problems(acceptance_log):
    rng = random.Random(9)
    failures = 0
    cases = 500
    for _ in range(cases):
        n = rng.randint(1, 4)
        m = rng.randint(1, 5)
        p0 = [F(k, m) for k in random_composition(rng, m, n)]
        alpha = F(rng.randint(0, 2 * m + 1), m)
        v = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
        p, val = inner_min_ell_inf(p0, alpha, v)
        if (val != vertex_minimum(linf_vertices(p0, alpha), v)
                or any((x * m).denominator != 1 for x in p)):
            failures += 1
        p, val = inner_min_ell_1(p0, alpha, v)
        if (val != vertex_minimum(l1_vertices(p0, alpha), v)
                or any((x * 2 * m).denominator != 1 for x in p)):
            failures += 1
    report(acceptance_log, 9, failures == 0,
           f"{cases} random rows x (l-inf, l1): inner minima equal vertex "
           f"enumeration, denominators divide m / 2m; {failures} failures")


def test_criterion_10_robust_bound(acceptance_log):
    rng = random.Random(10)
    violations = 0
    count = 50
    for k in range(count):
        m = rng.randint(1, 4)
        M = random_instance(2, rng.randint(1, 2), m, 4, seed=10_000 + k)
        beta = rng.randint(0, 1 if m < 3 else 2)
        U = uniform_uncertainty(M, "linf", F(beta, M.m))
        A = robust_blackwell_analysis(M, U)
        t = IsolatedRoot.exact(robust_eta_bound(M, U).gamma_threshold)
        if not A.blackwell_set or compare_roots(A.gamma_bw, t) > 0:
            violations += 1
    report(acceptance_log, 10, violations == 0,
           f"{count} two-state l-inf robust instances: robust gamma_bw <= 1 - eta(M); "
           f"{violations} violations")
