"""Finite Dickson nearfields: construction, distributive structure, verification."""

from .dickson import AxiomReport, Nearfield, NotADicksonPairError, PresentationReport, build_nearfield
from .gf import (
    DEFAULT_SIZE_CAP,
    DomainError,
    Field,
    FieldError,
    NotAGeneratorError,
    Poly,
    ReducibleModulusError,
    SizeCapError,
    field_build,
    find_irreducible,
    poly_is_irreducible,
)
from .numth import (
    CosetLabelMap,
    DicksonPair,
    Factorization,
    NotBijectiveError,
    PairVerdict,
    bracket_number,
    coset_label_map,
    factorize,
    is_dickson_pair,
    is_prime,
    prime_power,
)

__all__ = [
    "AxiomReport",
    "CosetLabelMap",
    "DEFAULT_SIZE_CAP",
    "DicksonPair",
    "DomainError",
    "Factorization",
    "Field",
    "FieldError",
    "Nearfield",
    "NotADicksonPairError",
    "NotAGeneratorError",
    "NotBijectiveError",
    "PairVerdict",
    "Poly",
    "PresentationReport",
    "ReducibleModulusError",
    "SizeCapError",
    "bracket_number",
    "build_nearfield",
    "coset_label_map",
    "factorize",
    "field_build",
    "find_irreducible",
    "is_dickson_pair",
    "is_prime",
    "poly_is_irreducible",
    "prime_power",
]

__version__ = "0.1.0"
