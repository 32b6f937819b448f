"""Exception hierarchy for ruelle_zeta.

``ConfigError`` maps to CLI exit code 2, every ``NumericalError`` to exit code 3.
"""
from __future__ import annotations

from typing import Optional


class RuelleZetaError(Exception):
    """Base class for all package errors."""


class ConfigError(RuelleZetaError, ValueError):
    """Invalid run configuration or parameter range."""


class NumericalError(RuelleZetaError, RuntimeError):
    """A computation could not produce a trustworthy result."""


class DegenerateHitError(NumericalError):
    """A ray touches a disc tangentially."""


class OrbitNotConvergedError(NumericalError):
    """Newton iteration for a periodic orbit did not converge."""


class ShadowedOrbitError(NumericalError):
    """A symbolic word has no obstacle-free realization at this d/r."""


class HyperbolicityError(NumericalError):
    """A solved orbit has |Lambda| <= 1."""


class MissingCycleError(NumericalError):
    """A prime cycle required by a cycle expansion is not in the orbit table."""


class PoleProximityError(NumericalError):
    """Evaluation point sits on (or next to) a zero of a zeta band."""

    def __init__(self, message: str, band: Optional[int] = None) -> None:
        super().__init__(message)
        self.band = band


class DivergenceError(NumericalError):
    """The direct orbit sum does not converge at the requested point."""


class NonSimpleResonanceError(NumericalError):
    """The ratio formula needs a simple zero of a single band."""


class BandCollisionError(NonSimpleResonanceError):
    """Two zeta bands vanish at (almost) the same point."""


class ContourError(NumericalError):
    """A residue contour encloses other zeros or passes through one."""
