"""Level-one modular forms as coordinates in the integral Miller basis.

The weight-k Miller basis b_0, ..., b_{d-1} of M_k(SL2(Z), Z) is integral
and echelonized: b_i = q^i + O(q^d).  The first d coefficients of a form are
therefore its coordinates, which makes expressing a q-expansion in the basis
a read-off followed by a consistency check against the remaining
coefficients.  The same basis reduced mod p^m is a basis of
M_k(SL2(Z), Z/p^mZ).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .arith import INFINITY, PrimePowerModulus, vp
from .eisenstein import E, E2
from .errors import (DomainMismatch, InsufficientPrecision, NotModularOfThisWeight,
                     NotNormalized, PrecisionTooLow)
from .qseries import QQ, ZZ, QSeries, Ring, Zpm, theta_naive


def dim_Mk(k: int) -> int:
    """Dimension of M_k(SL2(Z))."""
    if k < 0 or k % 2:
        return 0
    return k // 12 + (0 if k % 12 == 2 else 1)


def sturm_bound(k: int) -> int:
    """Number of leading coefficients that pin down a weight-k form."""
    return k // 12 + 1


def default_precision(weight: int) -> int:
    """Working precision for tasks whose largest weight is ``weight``.

    Congruences found at this precision are re-verified at twice it.
    """
    return weight // 12 + 5


def _integral_ring(ring: Ring) -> Ring:
    return ZZ if ring.kind in ("Q", "Z") else ring


@lru_cache(maxsize=None)
def delta(precision: int, ring: Ring = ZZ) -> QSeries:
    """The discriminant (E4^3 - E6^2)/1728 = q - 24 q^2 + ..."""
    base = _integral_ring(ring)
    e4, e6 = E(4, precision, base), E(6, precision, base)
    diff = e4 ** 3 - e6 ** 2
    if base.kind == "Z":
        out = QSeries._raw([c // 1728 for c in diff.coeffs], ZZ)
    else:
        out = diff.scale(pow(1728, -1, base.modulus))
    return out if ring == base else out.change_ring(ring)


# -- Miller basis ------------------------------------------------------------

@dataclass(frozen=True)
class MillerBasis:
    """Echelon basis of weight-k level-one forms: b_i[j] = delta_ij for j < d."""

    weight: int
    dimension: int
    basis_series: tuple
    precision: int
    ring: Ring = ZZ

    def __len__(self):
        return self.dimension

    def __iter__(self):
        return iter(self.basis_series)

    def combination(self, coords: Sequence, ring: Ring | None = None) -> QSeries:
        """q-expansion of sum coords[i] * b_i over ``ring``."""
        ring = ring or self.ring
        out = [ring.coerce(0)] * self.precision
        for c, b in zip(coords, self.basis_series):
            if c:
                out = [x + c * y for x, y in zip(out, b.coeffs)]
        if ring.kind == "Zpm":
            out = [x % ring.modulus for x in out]
        return QSeries._raw(out, ring)


_EXTRA = {0: (0, 0), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1), 14: (2, 1)}


@lru_cache(maxsize=None)
def miller_basis(k: int, precision: int, ring: Ring = ZZ) -> MillerBasis:
    """Integral echelon basis of M_k, built over Z or directly modulo p^m.

    Starts from Delta^i E6^(2(d-1-i)) E4^a E6^b, which equals q^i + O(q^(i+1)),
    and clears the entries above the diagonal.
    """
    if ring.kind == "Q":
        raise DomainMismatch("the Miller basis is integral; use ZZ or Zpm")
    d = dim_Mk(k)
    if precision < d + 1:
        raise PrecisionTooLow(f"weight {k} needs precision >= {d + 1}, got {precision}")
    if d == 0:
        return MillerBasis(k, 0, (), precision, ring)
    if d == 1 and k == 0:
        return MillerBasis(k, 1, (QSeries.one(precision, ring),), precision, ring)
    a, b = _EXTRA[k - 12 * (d - 1)]
    e4, e6, disc = E(4, precision, ring), E(6, precision, ring), delta(precision, ring)
    tail = e4 ** a * e6 ** b
    e6_squared = e6 * e6
    gens = []
    disc_power = QSeries.one(precision, ring)
    for i in range(d):
        gens.append(disc_power * e6_squared ** (d - 1 - i) * tail)
        disc_power = disc_power * disc
    for j in range(d - 1, 0, -1):
        for i in range(j):
            c = gens[i][j]
            if c:
                gens[i] = gens[i] - gens[j].scale(c)
    return MillerBasis(k, d, tuple(gens), precision, ring)


# -- forms -------------------------------------------------------------------

@dataclass(frozen=True)
class Form:
    """A weight-k level-one form given by its Miller-basis coordinates.

    ``ring`` is the coefficient ring of the coordinates (Q, Z or Z/p^m);
    the q-expansion is recomputed on demand at any precision and cached.
    """

    weight: int
    coords: tuple
    ring: Ring = ZZ
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if len(self.coords) != dim_Mk(self.weight):
            raise ValueError(f"weight {self.weight} needs {dim_Mk(self.weight)} coordinates, "
                             f"got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(self.ring.coerce(c) for c in self.coords))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def expansion(self, precision: int) -> QSeries:
        cached = self._cache.get("series")
        if cached is not None and cached.precision >= precision:
            return cached.truncate(precision)
        basis = miller_basis(self.weight, max(precision, self.dimension + 1),
                             _integral_ring(self.ring))
        series = basis.combination(self.coords, self.ring).truncate(precision)
        self._cache["series"] = series
        return series

    def vp(self, p: int):
        """p-adic valuation of the whole q-expansion (min over coordinates)."""
        if self.ring.kind == "Zpm":
            return min((vp(c, p) if c else INFINITY for c in self.coords), default=INFINITY)
        return min((vp(c, p) for c in self.coords), default=INFINITY)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def reduce(self, p: int, m: int) -> "Form":
        ring = Zpm(p, m)
        if self.ring.kind == "Zpm" and self.ring.mod.p == p and self.ring.mod.m >= m:
            return Form(self.weight, tuple(c % ring.modulus for c in self.coords), ring)
        return Form(self.weight, self.coords, ring)

    def lift(self) -> "Form":
        """Integral form whose coordinates are the representatives in [0, p^m)."""
        if self.ring.kind != "Zpm":
            raise DomainMismatch("only forms over Z/p^m can be lifted")
        return Form(self.weight, self.coords, ZZ)

    def change_ring(self, ring: Ring) -> "Form":
        if ring.kind == "Zpm":
            return self.reduce(ring.mod.p, ring.mod.m)
        return Form(self.weight, self.coords, ring)

    def __add__(self, other: "Form") -> "Form":
        self._match(other, same_weight=True)
        return Form(self.weight, tuple(a + b for a, b in zip(self.coords, other.coords)), self.ring)

    def __sub__(self, other: "Form") -> "Form":
        self._match(other, same_weight=True)
        return Form(self.weight, tuple(a - b for a, b in zip(self.coords, other.coords)), self.ring)

    def scale(self, c) -> "Form":
        c = self.ring.coerce(c)
        return Form(self.weight, tuple(c * a for a in self.coords), self.ring)

    def __mul__(self, other):
        if not isinstance(other, Form):
            return self.scale(other)
        self._match(other, same_weight=False)
        weight = self.weight + other.weight
        n = 2 * default_precision(weight)
        return express(self.expansion(n) * other.expansion(n), weight)

    __rmul__ = scale

    def __pow__(self, e: int) -> "Form":
        if e < 0:
            raise ValueError("negative powers of forms are not forms")
        weight = self.weight * e
        n = 2 * default_precision(weight)
        return express(self.expansion(n) ** e, weight)

    def _match(self, other: "Form", same_weight: bool) -> None:
        if self.ring != other.ring:
            raise DomainMismatch(f"forms over {self.ring} and {other.ring} do not combine")
        if same_weight and self.weight != other.weight:
            raise ValueError(f"weights {self.weight} and {other.weight} differ")

    def to_dict(self) -> dict:
        out = {"weight": str(self.weight), "ring": self.ring.kind,
               "coords": [str(c) for c in self.coords]}
        if self.ring.mod is not None:
            out["p"], out["m"] = str(self.ring.mod.p), str(self.ring.mod.m)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Form":
        kind = data.get("ring", "Z")
        ring = Zpm(int(data["p"]), int(data["m"])) if kind == "Zpm" else Ring(kind)
        parse = Fraction if kind == "Q" else int
        return cls(int(data["weight"]), tuple(parse(c) for c in data["coords"]), ring)


def constant_form(c=1, ring: Ring = ZZ) -> Form:
    return Form(0, (c,), ring)


def express(f: QSeries, k: int) -> Form:
    """Write a q-expansion as a weight-k form over the series' ring.

    Raises :class:`NotModularOfThisWeight` if any coefficient past the
    echelon positions disagrees with the read-off combination.
    """
    d = dim_Mk(k)
    if f.precision < max(d + 1, sturm_bound(k) + 1):
        raise PrecisionTooLow(f"expressing in weight {k} needs precision >= "
                              f"{max(d + 1, sturm_bound(k) + 1)}, got {f.precision}")
    coords = f.coeffs[:d]
    form = Form(k, coords, f.ring)
    if form.expansion(f.precision) != f:
        raise NotModularOfThisWeight(f"q-expansion is not that of a weight-{k} form over {f.ring}")
    return form


# -- linear algebra over Z/p^m ------------------------------------------------

def solve_mod_prime_power(matrix: Sequence[Sequence[int]], rhs: Sequence[int],
                          p: int, m: int) -> list[int] | None:
    """Solve matrix . x = rhs over Z/p^mZ, or return None if unsolvable.

    Gaussian elimination that always pivots on an entry of minimal p-adic
    valuation in the remaining block, so every elimination step divides
    exactly.  Free unknowns are set to 0.
    """
    modulus = p ** m
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    rows = [[x % modulus for x in row] + [b % modulus] for row, b in zip(matrix, rhs)]
    pivots = []
    free_cols = list(range(ncols))
    r = 0
    while r < nrows and free_cols:
        best = None
        for i in range(r, nrows):
            for col in free_cols:
                x = rows[i][col]
                if x:
                    v = vp(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, col)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, col = best
        rows[r], rows[i] = rows[i], rows[r]
        free_cols.remove(col)
        pv = p ** v
        inv = pow(rows[r][col] // pv, -1, modulus)
        pivot_row = rows[r]
        for i in range(r + 1, nrows):
            x = rows[i][col]
            if x:
                factor = (x // pv) * inv % modulus
                rows[i] = [(a - factor * b) % modulus for a, b in zip(rows[i], pivot_row)]
        pivots.append((r, col, v, inv))
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [0] * ncols
    for row_index, col, v, inv in reversed(pivots):
        row = rows[row_index]
        rest = (row[-1] - sum(row[c] * x[c] for c in range(ncols) if c != col)) % modulus
        if rest % p ** v:
            return None
        x[col] = (rest // p ** v) * inv % p ** (m - v)
    return x


def is_congruent_to_weight(target: QSeries, k: int, mod: PrimePowerModulus | None = None,
                           solve_precision: int | None = None) -> Form | None:
    """A weight-k form congruent to ``target`` mod p^m, or None if none exists.

    The linear system uses the first ``solve_precision`` coefficients (by
    default the working precision for weight k); the witness is then checked
    against every coefficient of ``target``.
    """
    if mod is None:
        if target.ring.kind != "Zpm":
            raise DomainMismatch("a modulus is required for targets over Q or Z")
        mod = target.ring.mod
    ring = Ring("Zpm", mod)
    target = target.change_ring(ring)
    needed = sturm_bound(k) + 1
    if target.precision < needed:
        raise InsufficientPrecision(f"weight {k} needs target precision >= {needed}, "
                                    f"got {target.precision}")
    d = dim_Mk(k)
    if d == 0:
        return Form(k, (), ring) if target.is_zero() else None
    rows_used = min(target.precision, max(solve_precision or default_precision(k), d + 1))
    basis = miller_basis(k, max(target.precision, d + 1), ring)
    matrix = [[b.coeffs[n] for b in basis] for n in range(rows_used)]
    x = solve_mod_prime_power(matrix, target.coeffs[:rows_used], mod.p, mod.m)
    if x is None:
        return None
    witness = Form(k, tuple(x), ring)
    if witness.expansion(target.precision) != target:
        return None
    return witness


# -- weight filtration -------------------------------------------------------

@dataclass
class FiltrationReport:
    """Smallest weight w admitting a form congruent to the input mod p^m."""

    input_weight: int
    mod: PrimePowerModulus
    w: int
    witness: Form
    rejected_weights: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "p": str(self.mod.p),
            "m": str(self.mod.m),
            "input_weight": str(self.input_weight),
            "w": str(self.w),
            "witness_coords": [str(c) for c in self.witness.coords],
            "rejected": [str(k) for k in self.rejected_weights],
        }


FormLike = Union[Form, QSeries]


def _as_residue_series(f: FormLike, k: int, ring: Ring, precision: int | None) -> QSeries:
    if isinstance(f, Form):
        if f.weight != k:
            raise ValueError(f"form has weight {f.weight}, not {k}")
        series = f.expansion(precision or 2 * default_precision(k))
    else:
        series = f if precision is None else f.truncate(precision)
    return series.change_ring(ring)


def weight_filtration(f: FormLike, k: int, p: int, m: int,
                      precision: int | None = None) -> FiltrationReport:
    """Compute w_{p^m}(f) for f of weight k that is nonzero mod p.

    Candidate weights are k - j p^(m-1)(p-1) >= 0, scanned from the bottom
    up; the first one admitting a witness is the filtration.
    """
    mod = PrimePowerModulus(p, m)
    ring = Ring("Zpm", mod)
    series = _as_residue_series(f, k, ring, precision)
    if series.precision < sturm_bound(k) + 1:
        raise InsufficientPrecision(f"weight {k} needs precision >= {sturm_bound(k) + 1}")
    if all(c % p == 0 for c in series.coeffs):
        raise NotNormalized("the form is congruent to 0 mod p")
    step = p ** (m - 1) * (p - 1)
    rejected = []
    for w in range(k % step, k + 1, step):
        witness = is_congruent_to_weight(series, w, mod)
        if witness is not None:
            return FiltrationReport(k, mod, w, witness, rejected)
        rejected.append(w)
    raise NotModularOfThisWeight(f"no weight <= {k} in the class of {k} mod {step} "
                                 f"realizes the input mod {mod}")


# -- operators ---------------------------------------------------------------

def hecke_Tl(f: QSeries, k: int, ell: int, precision: int | None = None) -> QSeries:
    """T_ell at level one: coefficient n becomes a_{ell n} + ell^(k-1) a_{n/ell}."""
    available = (f.precision - 1) // ell + 1
    n_out = available if precision is None else precision
    if n_out > available:
        raise InsufficientPrecision(f"T_{ell} to precision {n_out} needs input precision "
                                    f">= {ell * (n_out - 1) + 1}, got {f.precision}")
    ring = f.ring
    if ring.kind == "Zpm":
        power = pow(ell, k - 1, ring.modulus)
    elif k >= 1:
        power = ell ** (k - 1)
    elif ring.kind == "Q":
        power = Fraction(1, ell ** (1 - k))
    else:
        raise DomainMismatch(f"ell^(k-1) is not integral for k = {k}")
    out = []
    for n in range(n_out):
        c = f.coeffs[ell * n]
        if n % ell == 0:
            c = c + power * f.coeffs[n // ell]
        out.append(c)
    return f._normalize(out)


def partial_series(f: QSeries, k: int) -> QSeries:
    """Ramanujan's derivation on expansions: 12 theta(f) - k E2 f."""
    return theta_naive(f).scale(12) - (E2(f.precision, f.ring) * f).scale(k)


def partial_derivation(f: Form) -> Form:
    """The derivation of weight 2 taking M_k(Z) into M_{k+2}(Z)."""
    n = 2 * default_precision(f.weight + 2)
    try:
        return express(partial_series(f.expansion(n), f.weight), f.weight + 2)
    except NotModularOfThisWeight as exc:  # pragma: no cover - internal inconsistency
        raise NotModularOfThisWeight(f"derivation of a weight-{f.weight} form left "
                                     f"M_{f.weight + 2}: {exc}") from exc


# -- named forms -------------------------------------------------------------

def eisenstein_form(k: int, ring: Ring = QQ, normalized: bool = True) -> Form:
    """E_k (or G_k when ``normalized`` is False) as a form over ``ring``."""
    from .eisenstein import G
    n = 2 * default_precision(k)
    series = E(k, n, ring) if normalized else G(k, n, ring)
    return express(series, k)


def delta_form(ring: Ring = ZZ) -> Form:
    return Form(12, (0, 1), ring)
