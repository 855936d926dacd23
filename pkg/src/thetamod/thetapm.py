"""The theta operator modulo p^m with explicit target weight.

G_2 is congruent mod p^m to sum_j p^j f_j with f_j a genuine level-one form
of weight k_j.  Padding each f_j with a power of the Hasse invariant E_{p-1}
brings every summand to the common weight k(m) = 2 + 2 p^(m-1)(p-1), and

    theta_{p^m} f = (1/12) E_{p-1}^(2 p^(m-1)) df
                    - 2k f sum_j p^j E_{p-1}^(p^(m-j-1) t_j) f_j

is then a form of weight k + k(m) whose expansion is sum n a_n q^n mod p^m.
Here df = 12 theta(f) - k E_2 f is Ramanujan's derivation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .arith import PrimePowerModulus, bernoulli, is_prime, reduce_rational
from .eisenstein import E, G, G2
from .errors import HypothesisFailure, NoSolution
from .forms import (FiltrationReport, Form, default_precision, eisenstein_form, express,
                    hecke_Tl, is_congruent_to_weight, partial_derivation, weight_filtration)
from .qseries import QQ, ZZ, QSeries, Ring, Zpm, apply_V, apply_V_power, congruent_mod, \
    series_vp, theta_naive

log = logging.getLogger(__name__)


# -- weight bookkeeping ------------------------------------------------------

def weights_kj(p: int, m: int, j: int) -> int:
    """Weight k_j of the j-th summand in the decomposition of G_2 mod p^m."""
    if not 0 <= j < m:
        raise ValueError(f"j must lie in [0, {m}), got {j}")
    if m == 1:
        return p + 1
    if j == m - 1:
        return p ** (m - 1) * (p + 1)
    return 2 + p ** (m - j - 1) * (p ** (j + 1) - 1)


def km(p: int, m: int) -> int:
    """Weight shift k(m) = 2 + 2 p^(m-1)(p-1) of theta mod p^m."""
    return 2 + 2 * p ** (m - 1) * (p - 1)


def tj(p: int, m: int, j: int) -> int:
    """t_j with k(m) = k_j + t_j p^(m-j-1)(p-1)."""
    step = p ** (m - j - 1) * (p - 1)
    q, r = divmod(km(p, m) - weights_kj(p, m, j), step)
    assert r == 0 and q > 0, (p, m, j)
    return q


# -- approximating f|V by level-one forms ------------------------------------

def v_approximation_applies(k: int, s: int, t: int, p: int) -> bool:
    return min(s + 1, p ** s + 1 - k) >= t


def find_V_approximation(f: Form, s: int, t: int, p: int,
                         precision: int | None = None) -> Form:
    """An integral form h of weight k + p^s(p-1) with h = f|V mod p^t.

    Requires vp(f) = 0 and min(s + 1, p^s + 1 - k) >= t, under which such
    an h is known to exist; it is found by solving the congruence system
    in the target weight.  Failure to find it raises :class:`NoSolution`.
    """
    k = f.weight
    if not v_approximation_applies(k, s, t, p):
        raise ValueError(f"min(s+1, p^s+1-k) = {min(s + 1, p ** s + 1 - k)} < t = {t} "
                         f"for k={k}, s={s}, p={p}")
    if f.vp(p) != 0:
        raise ValueError(f"f must have p-adic valuation 0, got {f.vp(p)}")
    target_weight = k + p ** s * (p - 1)
    n = precision or 2 * default_precision(target_weight)
    fv = apply_V(f.expansion(-(-n // p)), p, n).change_ring(Zpm(p, t))
    h = is_congruent_to_weight(fv, target_weight)
    if h is None:
        raise NoSolution(f"no weight-{target_weight} form matches f|V mod {p}^{t}")
    h = h.lift()
    if h.vp(p) != 0:
        raise NoSolution("the approximation of f|V lost valuation 0")
    return h


# -- decomposition of G_2 ----------------------------------------------------

@dataclass(frozen=True)
class DecompositionEntry:
    j: int
    weight: int
    t: int
    form: Form


@dataclass(frozen=True)
class G2Decomposition:
    """Forms f_j of weight k_j with G_2 = sum_j p^j f_j mod p^m."""

    mod: PrimePowerModulus
    entries: tuple

    @property
    def p(self) -> int:
        return self.mod.p

    @property
    def m(self) -> int:
        return self.mod.m

    def series(self, precision: int) -> QSeries:
        """sum_j p^j f_j reduced mod p^m."""
        ring = Ring("Zpm", self.mod)
        total = QSeries.zero(precision, ring)
        for e in self.entries:
            total = total + e.form.expansion(precision).change_ring(ring).scale(self.p ** e.j)
        return total

    def check_invariants(self, precision: int = 40) -> dict[str, bool]:
        p, m = self.p, self.m
        weights = [e.weight for e in self.entries]
        last = self.entries[-1].form
        ring = Ring("Zpm", self.mod)
        n_last = max(precision, 2 * default_precision(last.weight))
        g_last = G(p + 1, n_last) ** (p ** (m - 1))
        return {
            "increasing_weights": all(a < b for a, b in zip(weights, weights[1:])),
            "weights_match": weights == [weights_kj(p, m, j) for j in range(m)],
            "valuation_zero": all(e.form.vp(p) == 0 for e in self.entries),
            "t_bookkeeping": all(km(p, m) == e.weight + e.t * p ** (m - e.j - 1) * (p - 1)
                                 for e in self.entries),
            "last_is_power_of_G_p_plus_1": last.expansion(n_last) == g_last,
            "congruent_to_G2": self.series(precision) == G2(precision, ring),
        }

    def to_dict(self) -> dict:
        return {
            "p": str(self.p),
            "m": str(self.m),
            "entries": [{"j": str(e.j), "weight": str(e.weight), "t": str(e.t),
                         "form": e.form.to_dict()} for e in self.entries],
        }


def _power_of_G(k: int, e: int) -> Form:
    weight = k * e
    n = 2 * default_precision(weight)
    return express(G(k, n) ** e, weight)


@lru_cache(maxsize=None)
def build_decomposition(p: int, m: int, precision: int | None = None) -> G2Decomposition:
    """Construct f_0, ..., f_{m-1} and verify every invariant before returning.

    For j <= m - 2 the construction starts from G_{2 + p^(m-j-1)(p-1)} and
    applies V j times, each time replacing the result by a level-one form
    congruent to it mod p^(m-j).  The last form is G_{p+1}^(p^(m-1)).
    """
    mod = PrimePowerModulus(p, m)
    entries = []
    for j in range(m):
        if m == 1:
            form = eisenstein_form(p + 1, QQ, normalized=False)
        elif j == m - 1:
            form = _power_of_G(p + 1, p ** (m - 1))
        else:
            form = eisenstein_form(2 + p ** (m - j - 1) * (p - 1), QQ, normalized=False)
            for r in range(j):
                form = find_V_approximation(form, m - j + r, m - j, p)
        entries.append(DecompositionEntry(j, form.weight, tj(p, m, j), form))
    decomposition = G2Decomposition(mod, tuple(entries))
    checks = decomposition.check_invariants(precision or 40)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise NoSolution(f"decomposition of G_2 mod {mod} violates {failed}")
    log.debug("built decomposition mod %s with weights %s", mod,
              [e.weight for e in entries])
    return decomposition


def shifted_eisenstein_sum(p: int, m: int, precision: int) -> QSeries:
    """sum_j p^j (G_{2 + p^(m-j-1)(p-1)} | V^j) mod p^m, straight from Eisenstein series."""
    ring = Zpm(p, m)
    total = QSeries.zero(precision, ring)
    for j in range(m):
        g = G(2 + p ** (m - j - 1) * (p - 1), precision, ring)
        total = total + apply_V_power(g, p, j, precision).scale(p ** j)
    return total


def serre_sum(p: int, m: int, precision: int) -> QSeries:
    """sum_i p^i (G_2* | V^i) mod p^m using the G_2* truncation mod p^m."""
    from .eisenstein import G_star
    ring = Zpm(p, m)
    g_star = G_star(2, p, m, precision)
    total = QSeries.zero(precision, ring)
    for i in range(m):
        total = total + apply_V_power(g_star, p, i, precision).scale(p ** i)
    return total


# -- theta mod p^m -----------------------------------------------------------

@dataclass(frozen=True)
class ThetaResult:
    input: Form
    output: Form
    mod: PrimePowerModulus
    decomposition: G2Decomposition

    @property
    def weight(self) -> int:
        return self.output.weight


def _integral(f: Form, p: int, m: int) -> Form:
    """An integral form congruent to f mod p^m; f must be p-integral."""
    if f.ring.kind == "Zpm":
        return f.lift()
    if f.ring.kind == "Q":
        if all(Fraction(c).denominator == 1 for c in f.coords):
            return f.change_ring(ZZ)
        if any(Fraction(c).denominator % p == 0 for c in f.coords):
            raise ValueError(f"theta_pm needs a {p}-integral form")
        return f.change_ring(Zpm(p, m)).lift()
    return f


def theta_pm(f: Form, p: int, m: int, precision: int | None = None) -> ThetaResult:
    """Apply theta mod p^m, landing in weight k + k(m).

    The output is expressed in the Miller basis mod p^m, and its expansion
    is checked against n a_n mod p^m before returning.
    """
    f = _integral(f, p, m)
    k = f.weight
    mod = PrimePowerModulus(p, m)
    ring = Ring("Zpm", mod)
    target_weight = k + km(p, m)
    n = precision or 2 * default_precision(target_weight)
    decomposition = build_decomposition(p, m)

    hasse = E(p - 1, n, ring)
    # each summand must already sit in the common target weight
    assert (p - 1) * 2 * p ** (m - 1) + k + 2 == target_weight
    assert all(e.weight + (p - 1) * p ** (m - e.j - 1) * e.t == km(p, m)
               for e in decomposition.entries)

    df = partial_derivation(f).expansion(n).change_ring(ring)
    main = (hasse ** (2 * p ** (m - 1)) * df).scale(reduce_rational(Fraction(1, 12), mod))
    g2_part = QSeries.zero(n, ring)
    for e in decomposition.entries:
        padded = hasse ** (p ** (m - e.j - 1) * e.t) * e.form.expansion(n).change_ring(ring)
        g2_part = g2_part + padded.scale(p ** e.j)
    fs = f.expansion(n).change_ring(ring)
    series = main - (fs * g2_part).scale(2 * k)

    output = express(series, target_weight)
    expected = theta_naive(fs)
    if series != expected:
        raise NoSolution(f"theta mod {mod} disagrees with n a_n on the first {n} coefficients")
    return ThetaResult(f, output, mod, decomposition)


# -- verifiers ---------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of one verification, serializable as a JSON report."""

    check: str
    params: dict
    status: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict[str, Any]:
        return {"check": self.check, "params": _stringify(self.params),
                "status": self.status, "details": _stringify(self.details)}


def _stringify(obj):
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def verify_commutation(f: Form, ell: int, p: int, m: int, precision: int = 12) -> CheckReport:
    """Check T_ell theta f = ell theta T_ell f mod p^m on ``precision`` coefficients."""
    if not is_prime(ell) or ell == p:
        raise ValueError(f"ell must be a prime different from p, got ell={ell}, p={p}")
    f = _integral(f, p, m)
    k = f.weight
    theta_f = theta_pm(f, p, m).output
    lhs = hecke_Tl(theta_f.expansion(ell * (precision - 1) + 1), k + km(p, m), ell, precision)

    n_in = ell * (2 * default_precision(k) - 1) + 1
    tf = express(hecke_Tl(f.expansion(n_in), k, ell), k)
    rhs = theta_pm(tf, p, m).output.expansion(precision).scale(ell)
    ok = lhs == rhs
    params = {"f_weight": k, "ell": ell, "p": p, "m": m, "precision": precision}
    return CheckReport("commutation", params, "pass" if ok else "fail",
                       {"lhs": list(lhs.coeffs), "rhs": list(rhs.coeffs)})


@dataclass
class OptimalWeightResult:
    predicted: int
    report: FiltrationReport

    @property
    def holds(self) -> bool:
        return self.report.w == self.predicted


def verify_optimal_weight(f: Form, p: int, m: int,
                          precision: int | None = None) -> OptimalWeightResult:
    """Compare w_{p^m}(theta f) with k + k(m) for f satisfying the hypotheses.

    The hypotheses are m >= 2, p not dividing k and w_p(f) = k; a violation
    raises :class:`HypothesisFailure` rather than being skipped.
    """
    f = _integral(f, p, m)
    k = f.weight
    if m < 2:
        raise HypothesisFailure("the optimal-weight statement needs m >= 2")
    if k % p == 0:
        raise HypothesisFailure(f"p = {p} divides the weight k = {k}")
    w_p = weight_filtration(f, k, p, 1).w
    if w_p != k:
        raise HypothesisFailure(f"w_{p}(f) = {w_p} differs from k = {k}")
    target = k + km(p, m)
    n = precision or 2 * default_precision(target)
    series = theta_naive(f.expansion(n)).change_ring(Zpm(p, m))
    return OptimalWeightResult(target, weight_filtration(series, target, p, m))


def bernoulli_congruence_sides(p: int) -> tuple[int, int]:
    """Both sides of B_2/2 = B_{p(p-1)+2}/(p(p-1)+2) + p B_{p+1}/(p+1), mod p^2."""
    mod = PrimePowerModulus(p, 2)
    big = p * (p - 1) + 2
    lhs = bernoulli(2) / 2
    rhs = bernoulli(big) / big + p * bernoulli(p + 1) / (p + 1)
    return reduce_rational(lhs, mod).value, reduce_rational(rhs, mod).value


def verify_bernoulli_congruence(p: int) -> bool:
    lhs, rhs = bernoulli_congruence_sides(p)
    return lhs == rhs


def verify_frobenius(f: QSeries, p: int) -> bool:
    """f|V = f^p mod p for an integral expansion f."""
    n = f.precision
    fz = f.change_ring(ZZ) if f.ring.kind == "Q" else f
    return congruent_mod(apply_V(fz, p, n), fz ** p, p, 1)


def is_unit_eisenstein(k: int, p: int, t: int, precision: int) -> bool:
    """Whether E_k = 1 mod p^t on the first ``precision`` coefficients."""
    e = E(k, precision)
    return series_vp(QSeries._raw(e.coeffs[1:], QQ), p) >= t


__all__ = [
    "CheckReport", "DecompositionEntry", "G2Decomposition", "OptimalWeightResult",
    "ThetaResult", "bernoulli_congruence_sides", "build_decomposition", "shifted_eisenstein_sum",
    "find_V_approximation", "is_unit_eisenstein", "km", "serre_sum", "theta_pm", "tj",
    "v_approximation_applies", "verify_bernoulli_congruence", "verify_commutation",
    "verify_frobenius", "verify_optimal_weight", "weights_kj",
]
