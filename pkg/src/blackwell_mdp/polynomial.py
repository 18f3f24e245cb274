"""Dense univariate polynomials with exact coefficients.

Coefficient tuples are stored lowest degree first and trimmed of trailing
zeros, so the zero polynomial is the empty tuple. The module-level helpers
work on plain tuples (they are the hot path of root isolation); the two
dataclasses wrap them for the public API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NonIntegralCoefficient


def trim(c: Iterable) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(c: Sequence) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(c) - 1


def add(a: Sequence, b: Sequence) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def sub(a: Sequence, b: Sequence) -> tuple:
    return add(a, neg(b))


def mul(a: Sequence, b: Sequence) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def scale(a: Sequence, k) -> tuple:
    return trim(x * k for x in a)


def derivative(a: Sequence) -> tuple:
    return trim(i * a[i] for i in range(1, len(a)))


def evaluate(a: Sequence, x):
    acc = 0
    for coef in reversed(a):
        acc = acc * x + coef
    return acc


def sign_at(a: Sequence[int], x: Fraction) -> int:
    """Sign of an integer polynomial at a rational point, in integer arithmetic."""
    num, den = x.numerator, x.denominator
    acc = 0
    power = 1
    # b^n p(a/b) = sum c_i a^i b^(n-i), accumulated by Horner in the numerator
    for coef in reversed(a):
        acc = acc * num + coef * power
        power *= den
    return (acc > 0) - (acc < 0)


def l1_norm(a: Sequence) -> int | Fraction:
    return sum(abs(x) for x in a)


def content(a: Sequence[int]) -> int:
    return math.gcd(*a) if a else 0


def primitive(a: Sequence[int]) -> tuple:
    """Divide out the content and make the leading coefficient positive."""
    a = trim(a)
    if not a:
        return ()
    g = content(a)
    if a[-1] < 0:
        g = -g
    return tuple(x // g for x in a)


def pseudo_rem(a: Sequence[int], b: Sequence[int]) -> tuple:
    """``lc(b)^(deg a - deg b + 1) * a mod b`` over the integers."""
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    steps = len(a) - len(b) + 1
    if steps <= 0:
        return trim(r)
    for _ in range(steps):
        if len(r) - 1 < db:
            r = [x * lc for x in r]
            continue
        top = r[-1]
        shift = len(r) - 1 - db
        r = [x * lc for x in r]
        for i, y in enumerate(b):
            r[shift + i] -= top * y
        r.pop()
        r = list(trim(r))
    return trim(r)


def exact_div(a: Sequence[int], b: Sequence[int]) -> tuple:
    """Quotient ``a / b`` in Z[x]; raises when the division is not exact."""
    a = list(trim(a))
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        if a:
            raise ArithmeticError("inexact polynomial division")
        return ()
    q = [0] * (len(a) - len(b) + 1)
    lc = b[-1]
    for k in range(len(q) - 1, -1, -1):
        top = a[k + len(b) - 1]
        if top % lc:
            raise ArithmeticError("inexact polynomial division")
        c = top // lc
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return trim(q)


def gcd(a: Sequence[int], b: Sequence[int]) -> tuple:
    """Primitive gcd in Z[x] (positive leading coefficient)."""
    a, b = primitive(a), primitive(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, primitive(pseudo_rem(a, b))
    return primitive(a)


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with Fraction coefficients, lowest degree first."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           trim(Fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return degree(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        return evaluate(self.coeffs, Fraction(x))

    def __add__(self, other: RationalPoly) -> RationalPoly:
        return RationalPoly(add(self.coeffs, other.coeffs))

    def __sub__(self, other: RationalPoly) -> RationalPoly:
        return RationalPoly(sub(self.coeffs, other.coeffs))

    def __mul__(self, other: RationalPoly) -> RationalPoly:
        return RationalPoly(mul(self.coeffs, other.coeffs))

    def __neg__(self) -> RationalPoly:
        return RationalPoly(neg(self.coeffs))

    def scaled(self, k) -> RationalPoly:
        return RationalPoly(scale(self.coeffs, Fraction(k)))

    def l1(self) -> Fraction:
        return l1_norm(self.coeffs)

    def to_integer(self, factor: int = 1) -> IntegerPoly:
        """``factor * self`` as an IntegerPoly; raises if not integral."""
        out = []
        for c in self.coeffs:
            v = c * factor
            if v.denominator != 1:
                raise NonIntegralCoefficient(
                    f"coefficient {c} times {factor} is not an integer")
            out.append(v.numerator)
        return IntegerPoly(tuple(out))


@dataclass(frozen=True)
class IntegerPoly:
    """Polynomial with integer coefficients, lowest degree first."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", trim(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return degree(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        return evaluate(self.coeffs, Fraction(x))

    def sign_at(self, x) -> int:
        return sign_at(self.coeffs, Fraction(x))

    def l1(self) -> int:
        return l1_norm(self.coeffs)

    def to_rational(self, divisor: int = 1) -> RationalPoly:
        return RationalPoly(tuple(Fraction(c, divisor) for c in self.coeffs))

    def __mul__(self, other: IntegerPoly) -> IntegerPoly:
        return IntegerPoly(mul(self.coeffs, other.coeffs))

    def __sub__(self, other: IntegerPoly) -> IntegerPoly:
        return IntegerPoly(sub(self.coeffs, other.coeffs))

    def __add__(self, other: IntegerPoly) -> IntegerPoly:
        return IntegerPoly(add(self.coeffs, other.coeffs))
