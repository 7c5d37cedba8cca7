"""Fusion (Verlinde) algebras of untwisted and twisted affine Lie algebras."""
from .cartan import AffineAlgebraData, AffineType, FiniteWeight, LevelWeight, affine_data, transpose
from .errors import KacFusionError
from .fusion import FusionAlgebra, check_grading, fusion_kw, fusion_verlinde, s_matrix, verlinde_algebra
from .modular import anomaly, cor58_check, modular_action, u21_action
from .quotient import QuotientAlgebra, f_k_prime, hong_quotient, two_thirds_check
from .twisted import sign_twist_check, twisted_verlinde
from .weights import enum_weights, grading_group

__version__ = "0.1.0"

__all__ = [
    "AffineAlgebraData",
    "AffineType",
    "FiniteWeight",
    "LevelWeight",
    "FusionAlgebra",
    "QuotientAlgebra",
    "KacFusionError",
    "affine_data",
    "transpose",
    "enum_weights",
    "grading_group",
    "fusion_kw",
    "fusion_verlinde",
    "s_matrix",
    "verlinde_algebra",
    "check_grading",
    "twisted_verlinde",
    "sign_twist_check",
    "hong_quotient",
    "f_k_prime",
    "two_thirds_check",
    "anomaly",
    "modular_action",
    "u21_action",
    "cor58_check",
]
