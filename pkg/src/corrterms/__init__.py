"""Exact Heegaard Floer correction terms, and the search that classifies
half-integral finite surgeries on knots in the three-sphere.

Everything is exact: correction terms are `fractions.Fraction`s, the search
works on common-denominator integer vectors, and no float appears anywhere.
"""

from .knots import (
    AlexPoly,
    CableKnot,
    TorsionError,
    TorusKnot,
    alex_cable,
    alex_from_torsion,
    alex_poly,
    alex_torus,
    catalog,
    d_surgery,
    genus,
    parse_knot,
    torsion_from_alex,
    validate_torsion,
)
from .lens import center, conj, d_lens, d_lens_vector, descent_chain
from .matcher import (
    CLASSIFICATION_TABLE,
    SEARCH_CEILING,
    DeltaStep,
    MatchResult,
    check_delta_step,
    delta,
    exclusion_bound,
    max_step_k,
    phi,
    prune_a_candidates,
    run_search,
    sample_delta_steps,
    try_match,
    verify_classification,
)
from .numtheory import Rational
from .spaceform import TrefoilFilling, chi, d_trefoil, enumerate_space_forms

__version__ = "0.1.0"

__all__ = [
    "AlexPoly",
    "CLASSIFICATION_TABLE",
    "CableKnot",
    "DeltaStep",
    "MatchResult",
    "Rational",
    "SEARCH_CEILING",
    "TorsionError",
    "TorusKnot",
    "TrefoilFilling",
    "alex_cable",
    "alex_from_torsion",
    "alex_poly",
    "alex_torus",
    "catalog",
    "center",
    "check_delta_step",
    "chi",
    "conj",
    "d_lens",
    "d_lens_vector",
    "d_surgery",
    "d_trefoil",
    "delta",
    "descent_chain",
    "enumerate_space_forms",
    "exclusion_bound",
    "genus",
    "max_step_k",
    "parse_knot",
    "phi",
    "prune_a_candidates",
    "run_search",
    "sample_delta_steps",
    "torsion_from_alex",
    "try_match",
    "validate_torsion",
    "verify_classification",
]
