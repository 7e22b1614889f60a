"""Decide Sobolev embeddings of shearlet coorbit spaces over the three-dimensional
standard and Toeplitz shearlet groups."""
from .exponents import INF, conjugate, gamma, parse_ext, parse_rational, q_down, theta_from
from .groups import FamilyIndex, Standard, Toeplitz, WeightSpec, matrix_A, matrix_B, norm_sum
from .analytic import MembershipAnswer, psi_in_ltheta, psi_in_ltheta_standard, psi_in_ltheta_toeplitz
from .verdict import (
    ParamTuple,
    Verdict,
    decide,
    exists_alpha,
    max_smoothness_k,
    same_embedding_behavior,
)

__version__ = "0.1.0"
