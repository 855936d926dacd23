"""Level-one Eisenstein series and truncations of Serre's p-adic G_k*."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .arith import bernoulli, divisors, reduce_rational, sigma, sigma_star
from .errors import DivisibilityViolation
from .qseries import QQ, QSeries, Ring, Zpm


def _check_weight(k: int, minimum: int) -> None:
    if not isinstance(k, int) or k % 2 or k < minimum:
        raise ValueError(f"weight must be an even integer >= {minimum}, got {k!r}")


def _sigma_coefficients(t: int, precision: int, ring: Ring) -> list:
    if ring.kind == "Zpm":
        modulus = ring.modulus
        return [sum(pow(d, t, modulus) for d in divisors(n)) % modulus
                for n in range(1, precision)]
    return [ring.coerce(sigma(t, n)) for n in range(1, precision)]


def eisenstein_constant(k: int) -> Fraction:
    """Constant term -B_k / 2k of G_k."""
    return -bernoulli(k) / (2 * k)


@lru_cache(maxsize=None)
def _G(k: int, precision: int, ring: Ring) -> QSeries:
    constant = ring.coerce(eisenstein_constant(k))
    return QSeries._raw([constant] + _sigma_coefficients(k - 1, precision, ring), ring)


def G(k: int, precision: int, ring: Ring = QQ) -> QSeries:
    """G_k = -B_k/2k + sum sigma_{k-1}(n) q^n, for even k >= 4.

    Over Z/p^m the constant term must be p-integral; it is not when
    (p - 1) | k, and :class:`~thetamod.errors.NonInvertibleDenominator`
    is raised.
    """
    _check_weight(k, 4)
    return _G(k, precision, ring)


@lru_cache(maxsize=None)
def _E(k: int, precision: int, ring: Ring) -> QSeries:
    factor = -Fraction(2 * k) / bernoulli(k)
    if ring.kind == "Zpm":
        c = reduce_rational(factor, ring.mod).value
        modulus = ring.modulus
        tail = [c * s % modulus for s in _sigma_coefficients(k - 1, precision, ring)]
        return QSeries._raw([1 % modulus] + tail, ring)
    return QSeries._raw([ring.coerce(1)] + [ring.coerce(factor * sigma(k - 1, n))
                                            for n in range(1, precision)], ring)


def E(k: int, precision: int, ring: Ring = QQ) -> QSeries:
    """Normalized Eisenstein series E_k = -(2k/B_k) G_k with constant term 1."""
    _check_weight(k, 4)
    return _E(k, precision, ring)


def G2(precision: int, ring: Ring = QQ) -> QSeries:
    """The quasi-modular G_2 = -1/24 + sum sigma_1(n) q^n."""
    return _G(2, precision, ring)


@lru_cache(maxsize=None)
def E2(precision: int, ring: Ring = QQ) -> QSeries:
    """E_2 = -24 G_2 = 1 - 24 sum sigma_1(n) q^n, integral unlike G_2."""
    return QSeries([1] + [-24 * c for c in _sigma_coefficients(1, precision, ring)], ring)


def shifted_weight(k: int, p: int, t: int) -> int:
    """Weight k + p^(t-1)(p-1) whose G-series represents G_k* mod p^t."""
    return k + p ** (t - 1) * (p - 1)


def _check_star(k: int, p: int, t: int, constant_term: bool) -> None:
    _check_weight(k, 2)
    if t < 1:
        raise ValueError("t must be a positive integer")
    if constant_term and k % (p - 1) == 0:
        raise DivisibilityViolation(f"(p - 1) = {p - 1} divides k = {k}")


def G_star(k: int, p: int, t: int, precision: int, constant_term: bool = True) -> QSeries:
    """G_k* mod p^t, realized as G_{k + p^(t-1)(p-1)} reduced mod p^t.

    With ``constant_term=False`` only the q^n coefficients for n >= 1 are
    produced (the constant is set to 0); those are congruent termwise for
    every even k, so the (p - 1) | k restriction is lifted.
    """
    _check_star(k, p, t, constant_term)
    ring = Zpm(p, t)
    weight = shifted_weight(k, p, t)
    if constant_term:
        return G(weight, precision, ring)
    return QSeries._raw([0] + _sigma_coefficients(weight - 1, precision, ring), ring)


def G_star_direct(k: int, p: int, t: int, precision: int, constant_term: bool = True) -> QSeries:
    """G_k* mod p^t from divisor sums over divisors prime to p.

    Coefficient n >= 1 is sum_{d | n, p does not divide d} d^(k-1) mod p^t.
    The constant term is copied from :func:`G_star`.
    """
    _check_star(k, p, t, constant_term)
    ring = Zpm(p, t)
    modulus = ring.modulus
    constant = G_star(k, p, t, 1)[0] if constant_term else 0
    return QSeries._raw([constant] + [sigma_star(k - 1, n, p) % modulus
                                      for n in range(1, precision)], ring)
