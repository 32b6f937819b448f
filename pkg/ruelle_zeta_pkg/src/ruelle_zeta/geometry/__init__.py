"""Disc geometry, billiard flow primitives and C3v symmetry."""
from .discs import (
    DiscSystem,
    PhasePoint,
    Reflection,
    SectionPoint,
    fold_to_fundamental,
    from_birkhoff,
    next_reflection,
    reflect,
    to_birkhoff,
)
from .symmetry import C3V, IDENTITY, GroupElement, element_mapping, folding_element, in_wedge

__all__ = [
    "C3V",
    "DiscSystem",
    "GroupElement",
    "IDENTITY",
    "PhasePoint",
    "Reflection",
    "SectionPoint",
    "element_mapping",
    "fold_to_fundamental",
    "folding_element",
    "from_birkhoff",
    "in_wedge",
    "next_reflection",
    "reflect",
    "to_birkhoff",
]
