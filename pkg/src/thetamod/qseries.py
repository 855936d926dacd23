"""Truncated q-expansions over Q, Z or Z/p^mZ.

A :class:`QSeries` stores the coefficients a_0 .. a_{N-1} of a power series
known modulo q^N.  Every operation records the precision it can guarantee,
and series over different coefficient rings never combine implicitly; use
:meth:`QSeries.change_ring` and :meth:`QSeries.lift` to move between them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import INFINITY, PrimePowerModulus, Residue, reduce_rational, vp
from .errors import DomainMismatch, InsufficientPrecision


@dataclass(frozen=True)
class Ring:
    """Coefficient domain descriptor: ``Q``, ``Z`` or ``Zpm`` (with modulus)."""

    kind: str
    mod: PrimePowerModulus | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "Z", "Zpm"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if (self.kind == "Zpm") != (self.mod is not None):
            raise ValueError("a modulus is given exactly for the Zpm ring")

    @property
    def modulus(self) -> int | None:
        return self.mod.modulus if self.mod is not None else None

    def coerce(self, x):
        """Bring a scalar into this ring, refusing lossy conversions."""
        if isinstance(x, Residue):
            if self.mod != x.mod:
                raise DomainMismatch(f"{x!r} does not belong to {self}")
            return x.value
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if self.kind == "Z":
                if x.denominator != 1:
                    raise DomainMismatch(f"{x} is not an integer")
                return x.numerator
            return reduce_rational(x, self.mod).value
        if not isinstance(x, int):
            raise DomainMismatch(f"cannot coerce {type(x).__name__} into {self}")
        return x % self.mod.modulus if self.kind == "Zpm" else x

    def __str__(self):
        return f"Z/{self.mod}" if self.kind == "Zpm" else self.kind


QQ = Ring("Q")
ZZ = Ring("Z")


def Zpm(p: int, m: int) -> Ring:
    return Ring("Zpm", PrimePowerModulus(p, m))


def _convolve(a: Sequence, b: Sequence, n: int) -> list:
    out = []
    for k in range(n):
        acc = 0
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            ai = a[i]
            if ai:
                acc += ai * b[k - i]
        out.append(acc)
    return out


def _convolve_packed(a: Sequence[int], b: Sequence[int], n: int, modulus: int) -> list[int]:
    # Kronecker substitution: pack non-negative residues into one big integer
    # per series so CPython's Karatsuba does the convolution.
    width = ((n * (modulus - 1) ** 2).bit_length() + 8) // 8
    pa = int.from_bytes(b"".join(c.to_bytes(width, "little") for c in a[:n]), "little")
    pb = int.from_bytes(b"".join(c.to_bytes(width, "little") for c in b[:n]), "little")
    raw = (pa * pb).to_bytes(2 * n * width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") % modulus for i in range(n)]


class QSeries:
    """Immutable truncated q-expansion a_0 + a_1 q + ... + O(q^N)."""

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Iterable, ring: Ring = QQ, precision: int | None = None):
        values = [ring.coerce(c) for c in coeffs]
        if precision is not None:
            values = values[:precision] + [ring.coerce(0)] * (precision - len(values))
        if not values:
            raise InsufficientPrecision("a q-series needs precision >= 1")
        object.__setattr__(self, "coeffs", tuple(values))
        object.__setattr__(self, "ring", ring)

    @classmethod
    def _raw(cls, coeffs, ring: Ring) -> "QSeries":
        # Trusted constructor: coefficients already normalized for ``ring``.
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        object.__setattr__(obj, "ring", ring)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    @classmethod
    def zero(cls, precision: int, ring: Ring = QQ) -> "QSeries":
        return cls._raw([ring.coerce(0)] * precision, ring)

    @classmethod
    def one(cls, precision: int, ring: Ring = QQ) -> "QSeries":
        return cls._raw([ring.coerce(1)] + [ring.coerce(0)] * (precision - 1), ring)

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        if n >= len(self.coeffs):
            raise InsufficientPrecision(f"coefficient {n} is unknown at precision {self.precision}")
        return self.coeffs[n]

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.precision > 8 else ""
        return f"QSeries([{shown}{tail}], ring={self.ring}, precision={self.precision})"

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # -- ring structure -------------------------------------------------------

    def _check(self, other: "QSeries") -> int:
        if not isinstance(other, QSeries):
            raise DomainMismatch(f"cannot combine QSeries with {type(other).__name__}")
        if self.ring != other.ring:
            raise DomainMismatch(f"series over {self.ring} and {other.ring} do not combine")
        return min(self.precision, other.precision)

    def _normalize(self, values) -> "QSeries":
        if self.ring.kind == "Zpm":
            modulus = self.ring.modulus
            values = [v % modulus for v in values]
        return QSeries._raw(values, self.ring)

    def __add__(self, other: "QSeries") -> "QSeries":
        n = self._check(other)
        return self._normalize([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __sub__(self, other: "QSeries") -> "QSeries":
        n = self._check(other)
        return self._normalize([a - b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __neg__(self) -> "QSeries":
        return self._normalize([-a for a in self.coeffs])

    def scale(self, c) -> "QSeries":
        c = self.ring.coerce(c)
        return self._normalize([c * a for a in self.coeffs])

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        n = self._check(other)
        if self.ring.kind == "Zpm" and n > 16:
            return QSeries._raw(_convolve_packed(self.coeffs, other.coeffs, n, self.ring.modulus),
                                self.ring)
        return self._normalize(_convolve(self.coeffs, other.coeffs, n))

    def __rmul__(self, c) -> "QSeries":
        return self.scale(c)

    def __pow__(self, e: int) -> "QSeries":
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = QSeries.one(self.precision, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- truncation and change of ring ----------------------------------------

    def truncate(self, precision: int) -> "QSeries":
        if precision > self.precision:
            raise InsufficientPrecision(
                f"cannot extend precision {self.precision} to {precision}")
        return QSeries._raw(self.coeffs[:precision], self.ring)

    def change_ring(self, ring: Ring) -> "QSeries":
        """Map the series into ``ring``.

        Reduction Q -> Z/p^m requires p-integral coefficients, Q -> Z requires
        integral ones, and Z/p^m -> Z/p^t needs t <= m.  Going from Z/p^m
        back to Z or Q is :meth:`lift`, not a change of ring.
        """
        if ring == self.ring:
            return self
        if self.ring.kind == "Zpm":
            if ring.kind != "Zpm" or ring.mod.p != self.ring.mod.p or ring.mod.m > self.ring.mod.m:
                raise DomainMismatch(f"no reduction map from {self.ring} to {ring}")
            return QSeries._raw([c % ring.modulus for c in self.coeffs], ring)
        return QSeries._raw([ring.coerce(c) for c in self.coeffs], ring)

    def reduce(self, p: int, m: int) -> "QSeries":
        return self.change_ring(Zpm(p, m))

    def lift(self, ring: Ring = ZZ) -> "QSeries":
        """Lift residues in [0, p^m) back to integers (or rationals)."""
        if self.ring.kind != "Zpm":
            raise DomainMismatch("only series over Z/p^m can be lifted")
        return QSeries._raw([ring.coerce(c) for c in self.coeffs], ring)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        out = {"ring": self.ring.kind}
        if self.ring.mod is not None:
            out["p"] = self.ring.mod.p
            out["m"] = self.ring.mod.m
        out["precision"] = self.precision
        out["coeffs"] = [str(c) for c in self.coeffs]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "QSeries":
        kind = data["ring"]
        ring = Zpm(int(data["p"]), int(data["m"])) if kind == "Zpm" else Ring(kind)
        parse = Fraction if kind == "Q" else int
        coeffs = [parse(c) for c in data["coeffs"]]
        if len(coeffs) != int(data["precision"]):
            raise ValueError("precision does not match the number of coefficients")
        for c in coeffs:
            if kind == "Zpm" and not 0 <= c < ring.modulus:
                raise ValueError(f"residue {c} out of range for {ring}")
        return cls._raw(coeffs, ring)

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_dict(json.loads(text))


def add(f: QSeries, g: QSeries) -> QSeries:
    return f + g


def sub(f: QSeries, g: QSeries) -> QSeries:
    return f - g


def mul(f: QSeries, g: QSeries) -> QSeries:
    return f * g


def scale(c, f: QSeries) -> QSeries:
    return f.scale(c)


def pow(f: QSeries, e: int) -> QSeries:  # noqa: A001 - mirrors the operation name
    return f ** e


def theta_naive(f: QSeries) -> QSeries:
    """q d/dq on expansions: a_n -> n a_n."""
    return f._normalize([n * a for n, a in enumerate(f.coeffs)])


def apply_V(f: QSeries, p: int, precision: int | None = None) -> QSeries:
    """The V operator sum a_n q^n -> sum a_n q^{np}.

    The result is known to precision p * f.precision; ``precision`` caps it.
    """
    n_out = p * f.precision if precision is None else min(precision, p * f.precision)
    zero = f.ring.coerce(0)
    out = [zero] * n_out
    for n in range((n_out - 1) // p + 1):
        out[n * p] = f.coeffs[n]
    return QSeries._raw(out, f.ring)


def apply_V_power(f: QSeries, p: int, j: int, precision: int | None = None) -> QSeries:
    """j-fold application of V, i.e. q -> q^{p^j}."""
    for _ in range(j):
        f = apply_V(f, p, precision)
    return f


def _coefficient_vp(c, ring: Ring, p: int):
    if ring.kind == "Zpm":
        return INFINITY if c == 0 else vp(c, p)
    return vp(c, p)


def congruent_mod(f: QSeries, g: QSeries, p: int, t: int, precision: int | None = None) -> bool:
    """True iff the first ``precision`` coefficients of f - g have vp >= t.

    Defaults to comparing every coefficient both series know.
    """
    if f.ring != g.ring:
        raise DomainMismatch(f"series over {f.ring} and {g.ring} do not compare")
    shared = min(f.precision, g.precision)
    if precision is None:
        precision = shared
    elif precision > shared:
        raise InsufficientPrecision(
            f"comparison at precision {precision} but only {shared} coefficients are known")
    if f.ring.kind == "Zpm":
        if f.ring.mod.p != p or t > f.ring.mod.m:
            raise InsufficientPrecision(f"cannot decide a congruence mod {p}^{t} over {f.ring}")
        pt = p ** t
        return all((a - b) % pt == 0 for a, b in zip(f.coeffs[:precision], g.coeffs[:precision]))
    return all(vp(a - b, p) >= t for a, b in zip(f.coeffs[:precision], g.coeffs[:precision]))


def series_vp(f: QSeries, p: int):
    """Minimum p-adic valuation of the stored coefficients (INFINITY for 0)."""
    return min((_coefficient_vp(c, f.ring, p) for c in f.coeffs), default=INFINITY)
