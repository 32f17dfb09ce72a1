"""Exact arithmetic in real quadratic fields.

Values of the form a + b*sqrt(d) with a, b rational and d a nonnegative
integer, normalized so that d is square-free and d == 0 whenever the value
is rational.  Supports exact comparison, floor, and field arithmetic, which
is all the parameter-contraction and holonomy code needs.  Floats are
deliberately rejected: this module is the exact track.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return (s, f) with d == s*s*f and f square-free."""
    if d < 0:
        raise ValueError("negative radicand")
    s, f, p = 1, d, 2
    while p * p <= f:
        while f % (p * p) == 0:
            f //= p * p
            s *= p
        p += 1 if p == 2 else 2
    return s, f


class QuadraticNumber:
    """Immutable exact value a + b*sqrt(d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, d: int = 0):
        a, b = Fraction(a), Fraction(b)
        d = int(d)
        if b != 0 and d > 0:
            s, f = _squarefree_split(d)
            if f <= 1:
                a, b, d = a + b * s, Fraction(0), 0
            else:
                b, d = b * s, f
        else:
            b, d = Fraction(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    # --- properties ---

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("value is irrational")
        return self.a

    # --- coercion ---

    @classmethod
    def _coerce(cls, x) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"exact arithmetic does not accept {type(x).__name__}")

    def _same_field(self, other: "QuadraticNumber") -> int:
        """Common radicand for a binary op, or raise."""
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise TypeError("mixed radicands are not supported")

    # --- arithmetic ---

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self._same_field(o)
        return QuadraticNumber(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self._same_field(o)
        a = self.a * o.a + self.b * o.b * d
        b = self.a * o.b + self.b * o.a
        return QuadraticNumber(a, b, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self._same_field(o)
        # multiply by the conjugate; the norm a^2 - b^2 d is rational
        norm = o.a * o.a - o.b * o.b * d
        if norm == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        conj = QuadraticNumber(o.a, -o.b, d)
        num = self * conj
        return QuadraticNumber(num.a / norm, num.b / norm, d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        return -self if self < 0 else self

    # --- exact sign and order ---

    def _sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d exactly
        lhs, rhs = a * a, b * b * d
        if a > 0:   # b < 0
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return -1 if lhs > rhs else (1 if lhs < rhs else 0)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        try:
            return (self - o)._sign() == 0
        except TypeError:
            return False

    def __lt__(self, other):
        return (self - self._coerce(other))._sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other))._sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other))._sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other))._sign() >= 0

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self._sign() != 0

    # --- conversions ---

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def floor(self) -> int:
        """Exact floor, verified by integer comparison."""
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def __repr__(self):
        if self.is_rational:
            return f"QuadraticNumber({self.a})"
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"


def sqrt_int(d: int) -> QuadraticNumber:
    """Exact square root of a nonnegative integer."""
    return QuadraticNumber(0, 1, d)


ExactScalar = Union[int, Fraction, QuadraticNumber]


def exact_floor_div(x: ExactScalar, y: ExactScalar) -> int:
    """floor(x / y) computed exactly for positive exact scalars."""
    qx, qy = QuadraticNumber._coerce(x), QuadraticNumber._coerce(y)
    return (qx / qy).floor()


# --- continued fractions ---

def fraction_cf(x: Fraction, max_terms: int = 64) -> list[int]:
    """Continued-fraction coefficients of a rational (always terminates)."""
    terms: list[int] = []
    p, q = x.numerator, x.denominator
    while q != 0 and len(terms) < max_terms:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    return terms


def cf_convergents(terms: list[int]):
    """Yield convergents (p, q) of a continued fraction."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in terms:
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        yield p0, q0


def float_convergents(x: float, max_terms: int = 48):
    """Convergents of a float's continued fraction, stopping at noise level."""
    terms: list[int] = []
    r = x
    for _ in range(max_terms):
        a = math.floor(r)
        terms.append(a)
        frac = r - a
        if frac < 1e-14:
            break
        r = 1.0 / frac
    return list(cf_convergents(terms))
