"""S-Dowling posets D_n(G, S), their invariants and orbit configuration space counts."""

from .dowling import (
    DowlingContext,
    DowlingElement,
    DowlingPoset,
    EnumerationCapError,
    MalformedElementError,
    canonicalize,
    covers_down,
    covers_up,
    dd_context,
    dowling_context,
    enumerate_poset,
    interval_factors,
    leq,
    lower_decompose,
    parse_element,
    render,
    subposet_context,
    upper_label,
)
from .groups import FiniteGroup, GSetAction, cyclic_group, trivial_action
from .invariants import char_poly_factored, motive_eval, rep_decomposition, whitney_hilbert
from .poset import RankedPoset, char_poly_bruteforce, mobius_table
from .polynomial import IntPolynomial

__version__ = "0.1.0"

__all__ = [
    "DowlingContext",
    "DowlingElement",
    "DowlingPoset",
    "EnumerationCapError",
    "MalformedElementError",
    "canonicalize",
    "covers_down",
    "covers_up",
    "dd_context",
    "dowling_context",
    "enumerate_poset",
    "interval_factors",
    "leq",
    "lower_decompose",
    "parse_element",
    "render",
    "subposet_context",
    "upper_label",
    "FiniteGroup",
    "GSetAction",
    "cyclic_group",
    "trivial_action",
    "char_poly_factored",
    "motive_eval",
    "rep_decomposition",
    "whitney_hilbert",
    "RankedPoset",
    "char_poly_bruteforce",
    "mobius_table",
    "IntPolynomial",
]
