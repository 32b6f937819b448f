"""Resonance scans, residues and Laurent coefficients."""
from .residues import (
    ResidueCoefficients,
    default_contour_radius,
    laurent_coefficient,
    residue,
    residue_coefficients,
)
from .scan import (
    Rectangle,
    Resonance,
    escape_rate,
    leading_resonance,
    near_critical_line,
    newton_refine,
    scan,
    truncation_history,
    winding_number,
)

__all__ = [
    "Rectangle",
    "Resonance",
    "ResidueCoefficients",
    "default_contour_radius",
    "escape_rate",
    "laurent_coefficient",
    "leading_resonance",
    "near_critical_line",
    "newton_refine",
    "residue",
    "residue_coefficients",
    "scan",
    "truncation_history",
    "winding_number",
]
