"""Exact arithmetic for level-one modular forms modulo prime powers.

The centerpiece is :func:`theta_pm`, the operator q d/dq on forms mod p^m,
which lands in weight k + 2 + 2 p^(m-1)(p-1).
"""
from .arith import INFINITY, PrimePowerModulus, Residue, bernoulli, reduce_rational, sigma, \
    sigma_star, vp
from .eisenstein import E, E2, G, G2, G_star, G_star_direct
from .forms import (FiltrationReport, Form, MillerBasis, delta, delta_form, dim_Mk, express,
                    hecke_Tl, is_congruent_to_weight, miller_basis, partial_derivation,
                    weight_filtration)
from .qseries import QQ, ZZ, QSeries, Ring, Zpm, apply_V, congruent_mod, series_vp, theta_naive
from .thetapm import (G2Decomposition, ThetaResult, build_decomposition, find_V_approximation,
                      km, theta_pm, tj, verify_bernoulli_congruence, verify_commutation,
                      verify_optimal_weight, weights_kj)

__version__ = "0.1.0"

__all__ = [
    "INFINITY", "PrimePowerModulus", "Residue", "bernoulli", "reduce_rational", "sigma",
    "sigma_star", "vp",
    "E", "E2", "G", "G2", "G_star", "G_star_direct",
    "FiltrationReport", "Form", "MillerBasis", "delta", "delta_form", "dim_Mk", "express",
    "hecke_Tl", "is_congruent_to_weight", "miller_basis", "partial_derivation",
    "weight_filtration",
    "QQ", "ZZ", "QSeries", "Ring", "Zpm", "apply_V", "congruent_mod", "series_vp", "theta_naive",
    "G2Decomposition", "ThetaResult", "build_decomposition", "find_V_approximation", "km",
    "theta_pm", "tj", "verify_bernoulli_congruence", "verify_commutation",
    "verify_optimal_weight", "weights_kj",
]
