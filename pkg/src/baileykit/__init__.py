"""Exact q-series arithmetic, Bailey pairs, Hecke-type sums and an identity verifier."""

from .bailey import (
    BaileyPair,
    alpha_star,
    alpha_star_combo,
    bailey_limit_rho2,
    beta_from_alpha,
    conjugate_check,
    delta_pair,
    pair_diff31,
    pair_eq35,
    pair_eq41,
    pair_lemma25,
    pair_lemma26,
    pair_lemma27,
    pair_lemma31,
    pair_seed,
    pair_sum215,
    transform_d1_reverse,
    transform_l1,
    transform_s1,
    transform_s2,
    verify_pair,
)
from .catalog import Identity, VerificationReport, registry, verify
from .hecke import HeckeParams, appell_m, build_g1, build_g2, build_g3, hecke_f, inner_sum
from .qproducts import euler_phi, poch_finite, poch_infinite, theta_j
from .series import Comparison, Monomial, TruncatedSeries, equal_to_order, monomial

__version__ = "0.1.0"

__all__ = [
    "alpha_star",
    "alpha_star_combo",
    "appell_m",
    "bailey_limit_rho2",
    "BaileyPair",
    "beta_from_alpha",
    "build_g1",
    "build_g2",
    "build_g3",
    "Comparison",
    "conjugate_check",
    "delta_pair",
    "equal_to_order",
    "euler_phi",
    "hecke_f",
    "HeckeParams",
    "Identity",
    "inner_sum",
    "monomial",
    "Monomial",
    "pair_diff31",
    "pair_eq35",
    "pair_eq41",
    "pair_lemma25",
    "pair_lemma26",
    "pair_lemma27",
    "pair_lemma31",
    "pair_seed",
    "pair_sum215",
    "poch_finite",
    "poch_infinite",
    "registry",
    "theta_j",
    "transform_d1_reverse",
    "transform_l1",
    "transform_s1",
    "transform_s2",
    "TruncatedSeries",
    "VerificationReport",
    "verify",
    "verify_pair",
]
