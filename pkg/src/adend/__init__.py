"""Exact verification and construction tools for finite-dimensional algebras
with one or two bilinear operations over the rationals."""

from .algebra import AlgebraSpace, BilinForm, LinearMap, algebra_from_json, load_algebra, save_algebra
from .identity import Verdict, check_identity, parse_identity
from .structures import check_structure, get_structure, registry

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpace",
    "BilinForm",
    "LinearMap",
    "Verdict",
    "algebra_from_json",
    "check_identity",
    "check_structure",
    "get_structure",
    "load_algebra",
    "parse_identity",
    "registry",
    "save_algebra",
]
