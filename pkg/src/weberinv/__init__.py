"""Class polynomials from generalised Weber functions w_N = eta(z/N)/eta(z)."""

from .eta import AlgebraicPoly, RoundingError, class_polynomial, eta, j_invariant, weber_w
from .invariants import Inadmissible, InvariantChoice, generate_condition_table, select_invariant
from .modular import comparison_table, cosets, degrees, modular_polynomial
from .quadforms import Discriminant, QuadForm, class_number, class_representatives, n_system

__all__ = [
    "AlgebraicPoly",
    "Discriminant",
    "Inadmissible",
    "InvariantChoice",
    "QuadForm",
    "RoundingError",
    "class_number",
    "class_polynomial",
    "class_representatives",
    "comparison_table",
    "cosets",
    "degrees",
    "eta",
    "generate_condition_table",
    "j_invariant",
    "modular_polynomial",
    "n_system",
    "select_invariant",
    "weber_w",
]
