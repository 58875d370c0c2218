from ..residues import ResidueSet, residue_set_B, residue_set_BH
from .characters import DirichletCharacter, DirichletGroup, characters_mod, l_value, log_l_value
from .constants import (
    ConvergenceError,
    DeltaResult,
    NonCancellationError,
    delta,
    delta_direct,
    delta_l_function,
    gamma_real,
    k_constant,
    k_rational_factor,
)
from .mainterm import MainTerm, TermRow, classify, error_exponent_rho, growth, main_term_general, main_term_z2k

__all__ = [
    "ResidueSet",
    "residue_set_B",
    "residue_set_BH",
    "DirichletCharacter",
    "DirichletGroup",
    "characters_mod",
    "l_value",
    "log_l_value",
    "ConvergenceError",
    "DeltaResult",
    "NonCancellationError",
    "delta",
    "delta_direct",
    "delta_l_function",
    "gamma_real",
    "k_constant",
    "k_rational_factor",
    "MainTerm",
    "TermRow",
    "classify",
    "error_exponent_rho",
    "growth",
    "main_term_general",
    "main_term_z2k",
]
