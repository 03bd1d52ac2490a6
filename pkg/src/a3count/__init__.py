"""Rational points of bounded height on the A3 quartic del Pezzo surface over Q
and imaginary quadratic fields, counted directly and through the universal torsor."""

from .number_field import FieldContext, FracIdeal, Elem, make_field
from .surface import brute_force_count, height, psi
from .torsor import fiber_census, torsor_count
from .constant import alpha_volume, assemble_constant, euler_product, omega_infinity, theta8_average_identity

__version__ = "0.1.0"

__all__ = [
    "Elem",
    "FieldContext",
    "FracIdeal",
    "alpha_volume",
    "assemble_constant",
    "brute_force_count",
    "euler_product",
    "fiber_census",
    "height",
    "make_field",
    "omega_infinity",
    "psi",
    "theta8_average_identity",
    "torsor_count",
]
