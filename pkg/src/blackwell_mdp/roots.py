"""Exact real-root isolation on [0, 1] and root separation bounds.

Isolation works on the primitive squarefree part of an integer polynomial
with a Sturm sequence built by signed pseudo-remainders, so everything stays
in integer arithmetic. Each root is returned as an :class:`IsolatedRoot`:
either a point ``lo == hi`` (an exact rational root) or an open interval
``(lo, hi)`` holding exactly one root, with the polynomial nonzero and of
opposite signs at both ends.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import polynomial as P
from .errors import ZeroPolynomial
from .polynomial import IntegerPoly

ZERO = Fraction(0)
ONE = Fraction(1)


def _coeffs(p) -> tuple:
    return p.coeffs if isinstance(p, IntegerPoly) else P.trim(p)


def squarefree_part(p) -> IntegerPoly:
    """``p / gcd(p, p')`` made primitive with positive leading coefficient."""
    c = _coeffs(p)
    if not c:
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    return IntegerPoly(_squarefree(c))


def _squarefree(c: tuple) -> tuple:
    c = P.primitive(c)
    if len(c) <= 2:
        return c
    g = P.gcd(c, P.derivative(c))
    if len(g) == 1:
        return c
    return P.primitive(P.exact_div(c, g))


def sturm_sequence(q: tuple) -> list[tuple]:
    """Sturm sequence of a squarefree integer polynomial (up to positive factors)."""
    seq = [q]
    d = P.derivative(q)
    if not d:
        return seq
    seq.append(P.primitive(d) if d[-1] > 0 else P.neg(P.primitive(d)))
    while True:
        a, b = seq[-2], seq[-1]
        r = P.pseudo_rem(a, b)
        if not r:
            break
        power = len(a) - len(b) + 1
        # pseudo_rem multiplied by lc(b)^power; undo a negative sign, then negate
        if b[-1] < 0 and power % 2:
            r = P.neg(r)
        r = P.neg(r)
        g = P.content(r)
        seq.append(tuple(x // g for x in r))
    return seq


def sign_variations(seq: Sequence[tuple], x: Fraction) -> int:
    count = 0
    last = 0
    for f in seq:
        s = P.sign_at(f, x)
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


@dataclass(frozen=True)
class IsolatedRoot:
    """One real root of ``poly`` (squarefree, primitive): ``lo <= root <= hi``.

    When ``lo == hi`` the root is exactly that rational. Otherwise the root is
    the unique root of ``poly`` in the open interval. Roots are isolated on
    the squarefree part, so ``multiplicity_known`` is always False.
    """

    lo: Fraction
    hi: Fraction
    poly: tuple = field(repr=False, compare=False)
    multiplicity_known: bool = field(default=False, repr=False, compare=False)

    @classmethod
    def exact(cls, value) -> IsolatedRoot:
        v = Fraction(value)
        return cls(v, v, (-v.numerator, v.denominator))

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction | None:
        return self.lo if self.is_exact else None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def bisect(self) -> IsolatedRoot:
        if self.is_exact:
            return self
        mid = (self.lo + self.hi) / 2
        s = P.sign_at(self.poly, mid)
        if s == 0:
            return IsolatedRoot(mid, mid, self.poly)
        if s != P.sign_at(self.poly, self.hi):
            return IsolatedRoot(mid, self.hi, self.poly)
        return IsolatedRoot(self.lo, mid, self.poly)

    def refine(self, width) -> IsolatedRoot:
        """Narrow the interval below ``width`` (or to an exact point)."""
        r = self
        width = Fraction(width)
        while not r.is_exact and r.width >= width:
            r = r.bisect()
        return r

    def contains(self, x) -> bool:
        x = Fraction(x)
        if self.is_exact:
            return x == self.lo
        return self.lo < x < self.hi

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        return f"({self.lo}, {self.hi})"


def _rational_root_in(root: IsolatedRoot) -> IsolatedRoot:
    """Detect whether an isolated root is rational and return it as a point.

    A rational root ``a/b`` of a primitive integer polynomial has ``b`` dividing
    the leading coefficient ``B``. Two distinct fractions with denominators at
    most ``B`` are at least ``1/B^2`` apart, so once the interval is narrower
    than that, the closest such fraction to its midpoint is the only candidate.
    """
    q = root.poly
    if len(q) == 2:
        return IsolatedRoot.exact(Fraction(-q[0], q[1]))
    bound = abs(q[-1])
    root = root.refine(Fraction(1, bound * bound))
    if root.is_exact:
        return root
    cand = ((root.lo + root.hi) / 2).limit_denominator(bound)
    if root.lo < cand < root.hi and P.sign_at(q, cand) == 0:
        return IsolatedRoot(cand, cand, q)
    return root


def _isolate(q: tuple, lo: Fraction, hi: Fraction, *,
             include_lo: bool, include_hi: bool) -> list[IsolatedRoot]:
    """Isolate every root of squarefree ``q`` in the interval between lo and hi."""
    seq = sturm_sequence(q)
    out: list[IsolatedRoot] = []
    if include_lo and P.sign_at(q, lo) == 0:
        out.append(IsolatedRoot(lo, lo, q))
    hi_is_root = P.sign_at(q, hi) == 0
    v_lo, v_hi = sign_variations(seq, lo), sign_variations(seq, hi)
    stack = [(lo, hi, v_lo, v_hi, v_lo - v_hi - hi_is_root)]
    found: list[IsolatedRoot] = []
    while stack:
        a, b, va, vb, count = stack.pop()
        if count <= 0:
            continue
        if count == 1 and P.sign_at(q, a) and P.sign_at(q, b):
            found.append(_rational_root_in(IsolatedRoot(a, b, q)))
            continue
        mid = (a + b) / 2
        vm = sign_variations(seq, mid)
        b_root = P.sign_at(q, b) == 0
        if P.sign_at(q, mid) == 0:
            found.append(IsolatedRoot(mid, mid, q))
            stack.append((a, mid, va, vm, va - vm - 1))
        else:
            stack.append((a, mid, va, vm, va - vm))
        stack.append((mid, b, vm, vb, vm - vb - b_root))
    out.extend(sorted(found, key=lambda r: r.lo))
    if include_hi and hi_is_root:
        out.append(IsolatedRoot(hi, hi, q))
    return out


def isolate_roots(p, lo=ZERO, hi=ONE, *, include_hi: bool = False) -> list[IsolatedRoot]:
    """Distinct real roots of ``p`` in ``[lo, hi)`` (or ``[lo, hi]``), ascending."""
    c = _coeffs(p)
    if not c:
        raise ZeroPolynomial("cannot isolate the roots of the zero polynomial")
    q = _squarefree(c)
    if len(q) == 1:
        return []
    return _isolate(q, Fraction(lo), Fraction(hi), include_lo=True,
                    include_hi=include_hi)


def isolate_roots_in_unit_interval(p) -> list[IsolatedRoot]:
    """Distinct roots in ``[0, 1)``; a root at exactly 1 is left out."""
    return isolate_roots(p, ZERO, ONE)


def largest_root_below_one(p) -> IsolatedRoot | None:
    roots = isolate_roots_in_unit_interval(p)
    return roots[-1] if roots else None


# ------------------------------------------------------------- comparisons

def _count_open(g: tuple, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct roots of ``g`` in the open interval ``(lo, hi)``."""
    g = _squarefree(g)
    if len(g) == 1:
        return 0
    seq = sturm_sequence(g)
    return (sign_variations(seq, lo) - sign_variations(seq, hi)
            - (P.sign_at(g, hi) == 0))


def same_root(a: IsolatedRoot, b: IsolatedRoot) -> bool:
    """Exact equality test of two isolated algebraic numbers."""
    if a.is_exact and b.is_exact:
        return a.lo == b.lo
    if a.is_exact or b.is_exact:
        point, other = (a, b) if a.is_exact else (b, a)
        return other.contains(point.lo) and P.sign_at(other.poly, point.lo) == 0
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo >= hi:
        return False
    g = P.gcd(a.poly, b.poly)
    if len(g) <= 1:
        return False
    # any root of g inside both intervals is the unique root of each poly there
    return _count_open(g, lo, hi) > 0


def compare_roots(a: IsolatedRoot, b: IsolatedRoot) -> int:
    """-1, 0 or 1 according to the order of the two algebraic numbers."""
    if same_root(a, b):
        return 0
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        a, b = a.bisect(), b.bisect()


def compare_to_rational(a: IsolatedRoot, x) -> int:
    return compare_roots(a, IsolatedRoot.exact(x))


def separate(a: IsolatedRoot, b: IsolatedRoot) -> tuple[IsolatedRoot, IsolatedRoot]:
    """Refine two distinct roots ``a < b`` until ``a.hi < b.lo``."""
    while a.hi >= b.lo:
        a, b = a.bisect(), b.bisect()
    return a, b


def sort_unique(roots: Sequence[IsolatedRoot]) -> list[IsolatedRoot]:
    """Sort algebraic numbers and drop duplicates (exact comparisons)."""
    ordered = sorted(roots, key=functools.cmp_to_key(compare_roots))
    out: list[IsolatedRoot] = []
    for r in ordered:
        if out and compare_roots(out[-1], r) == 0:
            # keep the more informative certificate
            if r.is_exact and not out[-1].is_exact:
                out[-1] = r
            continue
        out.append(r)
    return out


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval ``(lo, hi)``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    if lo < 0:
        if hi > 0:
            return Fraction(0)
        return -simplest_between(-hi, -lo)
    n = math.floor(lo)
    if n + 1 < hi:
        return Fraction(n + 1)
    frac_lo, frac_hi = lo - n, hi - n
    if frac_lo == 0:
        inner = Fraction(math.floor(1 / frac_hi) + 1)
    else:
        inner = simplest_between(1 / frac_hi, 1 / frac_lo)
    return n + 1 / inner


def gap_exceeds(a: IsolatedRoot, b: IsolatedRoot, eta, max_steps: int = 4000) -> bool:
    """Decide ``b - a > eta`` for roots ``a < b`` by refining both certificates."""
    eta = Fraction(eta)
    for _ in range(max_steps):
        if b.lo - a.hi > eta:
            return True
        if b.hi - a.lo <= eta:
            return False
        a, b = a.bisect(), b.bisect()
    return False


# ------------------------------------------------------------- separation

def ceil_power_half(base: int, exponent2: int) -> int:
    """Integer ceiling of ``base ** (exponent2 / 2)``."""
    if exponent2 % 2 == 0:
        return base ** (exponent2 // 2)
    x = base ** exponent2
    r = math.isqrt(x)
    return r if r * r == x else r + 1


@dataclass(frozen=True)
class SeparationBound:
    N: int
    L: int
    eta: Fraction


def eta_formula(N: int, L: int) -> Fraction:
    """``1 / (2 ceil(N^(N/2+2)) (L+1)^N)`` for any ``N >= 1`` and ``L >= 0``."""
    return Fraction(1, 2 * ceil_power_half(N, N + 4) * (L + 1) ** N)


def rump_eta(N: int, L: int) -> SeparationBound:
    """Root separation ``1 / (2 N^(N/2+2) (L+1)^N)`` for integer polynomials.

    Distinct roots of an integer polynomial of degree ``N`` whose coefficient
    absolute values sum to ``L`` are more than ``eta`` apart. For odd ``N`` the
    power ``N^(N/2+2)`` is rounded up, which only makes ``eta`` smaller.
    """
    if N < 1 or L < 1:
        raise ValueError(f"rump_eta needs N >= 1 and L >= 1 (got N={N}, L={L})")
    return SeparationBound(N, L, eta_formula(N, L))
