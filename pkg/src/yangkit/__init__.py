"""Exact verification of Yangian relations on explicit modules over sl_n and affine sl_n."""
from .exact import Q, SparseMat, commutator, anticommutator, is_zero, poly_backend, rational_backend
from .rootdata import RootDatum, datum_for, dual_coxeter, killing_check, positive_roots, reduced_word
from .liemod import build_affine, build_finite, build_verma, tensor, window_check
from .yangops import YangianTower, evaluation_action, generate_tower, c_alpha_i
from .coprod import Coproduct, omega_plus, omega_minus, tensor_coproduct
from .verify import run_suite, check, truncation_soundness

__version__ = "0.1.0"
__all__ = [
    "Q", "SparseMat", "commutator", "anticommutator", "is_zero", "poly_backend", "rational_backend",
    "RootDatum", "datum_for", "dual_coxeter", "killing_check", "positive_roots", "reduced_word",
    "build_affine", "build_finite", "build_verma", "tensor", "window_check",
    "YangianTower", "evaluation_action", "generate_tower", "c_alpha_i",
    "Coproduct", "omega_plus", "omega_minus", "tensor_coproduct",
    "run_suite", "check", "truncation_soundness",
]
