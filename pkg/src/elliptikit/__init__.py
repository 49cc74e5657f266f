"""Elliptic Kronecker functions, regularised iterated integrals, hyperlogarithms
and reduction modulo derivatives on punctured elliptic curves."""

__version__ = "0.1.0"

from .lattice import LatticeContext, SingularityError, eisenstein_function, eisenstein_series, weierstrass_p
from .kronecker import g_values, kronecker_g
from .shuffle import Letter, ShuffleElement, antipode, parse_word, reconstruct, star_decompose
from .itint import Path, PathError, Punctures, iterated_integral
from .gamma import gamma_shuffle, gamma_tangential, standard_path
from .hyperlog import hl_eval, numeric_independence_check
from .diffalg import EllipticPoly, parse_expression, reduce_mod_derivative, reduce_multipoint
from . import uniformize  # module: uniformize.uniformize(a1, a2, a3)
from .config import RunConfig, load_config

__all__ = [
    "EllipticPoly", "LatticeContext", "Letter", "Path", "PathError", "Punctures", "RunConfig",
    "ShuffleElement", "SingularityError", "antipode", "eisenstein_function", "eisenstein_series",
    "g_values", "gamma_shuffle", "gamma_tangential", "hl_eval", "iterated_integral", "kronecker_g",
    "load_config", "numeric_independence_check", "parse_expression", "parse_word", "reconstruct",
    "reduce_mod_derivative", "reduce_multipoint", "standard_path", "star_decompose", "uniformize",
    "weierstrass_p",
]
