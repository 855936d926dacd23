"""Exact integer and rational arithmetic.

Bernoulli numbers, divisor power sums, p-adic valuations and the residue
rings Z/p^mZ.  Rationals are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import NonInvertibleDenominator

Rational = Fraction
Number = Union[int, Fraction]

#: Valuation of zero.  Compares above every integer and absorbs addition.
INFINITY = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimePowerModulus:
    """The modulus p^m with p >= 5 prime and m >= 1."""

    p: int
    m: int
    modulus: int = field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p) or self.p < 5:
            raise ValueError(f"p must be a prime >= 5, got {self.p!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "modulus", self.p ** self.m)

    def __str__(self):
        return f"{self.p}^{self.m}"


@dataclass(frozen=True)
class Residue:
    """An element of Z/p^mZ, stored by its representative in [0, p^m)."""

    value: int
    mod: PrimePowerModulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.mod.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.mod != self.mod:
                raise ValueError(f"residues modulo {self.mod} and {other.mod} do not mix")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value + o, self.mod)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value - o, self.mod)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(o - self.value, self.mod)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value * o, self.mod)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.mod)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value} mod {self.mod})"


# -- Bernoulli numbers -------------------------------------------------------

_bernoulli_lock = threading.Lock()
_bernoulli_even: list[Fraction] = [Fraction(1)]  # B_0, B_2, B_4, ...


def _tangent_numbers(n: int) -> list[int]:
    """Tangent numbers T_1..T_n (index 0 unused), all-integer recurrence."""
    t = [0] * (n + 1)
    if n == 0:
        return t
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def _extend_bernoulli_table(half: int) -> None:
    # The tangent recurrence is not incremental, so the table is rebuilt
    # with some headroom whenever it has to grow.
    target = max(half, 2 * (len(_bernoulli_even) - 1), 16)
    tangents = _tangent_numbers(target)
    table = [Fraction(1)]
    for n in range(1, target + 1):
        four_n = 1 << (2 * n)
        value = Fraction(2 * n * tangents[n], four_n * (four_n - 1))
        table.append(value if n % 2 == 1 else -value)
    _bernoulli_even[:] = table


def bernoulli(k: int) -> Fraction:
    """Return the k-th Bernoulli number, with the convention B_1 = -1/2.

    >>> bernoulli(12)
    Fraction(-691, 2730)
    """
    if k < 0:
        raise ValueError("Bernoulli numbers are indexed by k >= 0")
    if k == 1:
        return Fraction(-1, 2)
    if k % 2 == 1:
        return Fraction(0)
    half = k // 2
    with _bernoulli_lock:
        if half >= len(_bernoulli_even):
            _extend_bernoulli_table(half)
        return _bernoulli_even[half]


# -- divisor sums ------------------------------------------------------------

def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("divisors are defined for n >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def sigma(t: int, n: int) -> int:
    """Sum of d^t over the positive divisors d of n."""
    return sum(d ** t for d in divisors(n))


def sigma_star(t: int, n: int, p: int) -> int:
    """Like :func:`sigma` but only over divisors prime to p."""
    return sum(d ** t for d in divisors(n) if d % p)


# -- valuations and reduction ------------------------------------------------

def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: Number, p: int) -> int | float:
    """p-adic valuation of an integer or rational; :data:`INFINITY` for 0."""
    if x == 0:
        return INFINITY
    if isinstance(x, Fraction):
        return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)
    return _vp_int(int(x), p)


def reduce_rational(x: Number, mod: PrimePowerModulus) -> Residue:
    """Reduce a p-integral rational modulo p^m."""
    x = Fraction(x)
    if x.denominator % mod.p == 0:
        raise NonInvertibleDenominator(f"{x} is not {mod.p}-integral")
    inverse = pow(x.denominator, -1, mod.modulus)
    return Residue(x.numerator * inverse, mod)
