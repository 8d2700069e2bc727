"""Exact combinatorics of multi-matrix algebras and Bratteli diagrams over finite posets."""

from .exactalg import Element, MultiMatrixAlgebra, Scalar, make_algebra, matrix_unit, multiply
from .homs import Wiring, compose_homs, multiplicity_of, standard_wiring
from .diagrams import (
    BratteliDiagram,
    FinitePoset,
    InductiveSystem,
    builtin_diagram,
    diagrams_isomorphic,
    is_prime_diagram,
    parse_diagram,
    realize_chain,
    validate_diagram,
)
from .search import search_realization

__all__ = [
    "BratteliDiagram",
    "Element",
    "FinitePoset",
    "InductiveSystem",
    "MultiMatrixAlgebra",
    "Scalar",
    "Wiring",
    "builtin_diagram",
    "compose_homs",
    "diagrams_isomorphic",
    "is_prime_diagram",
    "make_algebra",
    "matrix_unit",
    "multiplicity_of",
    "multiply",
    "parse_diagram",
    "realize_chain",
    "search_realization",
    "standard_wiring",
    "validate_diagram",
]
