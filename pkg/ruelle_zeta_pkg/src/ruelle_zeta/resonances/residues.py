"""Residues and Laurent coefficients of the weighted zeta function at resonances.

At a simple zero of a single band the residue follows from derivatives of
that band alone. The contour integral is the independent route, and the only
one for multiple zeros.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..constants import DEFAULT_CONTOUR_NODES, MAX_CONTOUR_NODES
from ..errors import BandCollisionError, ContourError, NonSimpleResonanceError
from ..zeta.expansion import CycleExpansion, band_value_and_slope, weighted_zeta_many, zeta_inv
from .scan import Resonance

logger = logging.getLogger(__name__)

COLLISION_TOL = 1e-6
RICHARDSON_TOL = 1e-8


@dataclass(frozen=True)
class ResidueCoefficients:
    """Per-prime residue coefficients: residue(A) = -band * (A @ coefficients) / denominator."""

    band: int
    coefficients: np.ndarray
    denominator: complex

    def residue(self, weights: np.ndarray) -> complex:
        weights = np.asarray(weights, dtype=float)
        return -self.band * complex(weights @ self.coefficients) / self.denominator


def _band(expansions: Sequence[CycleExpansion], band: int) -> CycleExpansion:
    for expansion in expansions:
        if expansion.band == band:
            return expansion
    raise ValueError(f"No expansion for band {band}")


def _check_simple(expansions: Sequence[CycleExpansion], resonance: Resonance) -> None:
    if resonance.order != 1:
        raise NonSimpleResonanceError(
            f"Zero at {resonance.lam} has order {resonance.order}; use laurent_coefficient"
        )
    for other in expansions:
        if other.band == resonance.band:
            continue
        value, slope = band_value_and_slope(other, resonance.lam)
        if abs(value) <= COLLISION_TOL * abs(slope):
            raise BandCollisionError(
                f"Bands {resonance.band} and {other.band} both vanish near {resonance.lam}"
            )


def residue_coefficients(
    expansions: Sequence[CycleExpansion], resonance: Resonance
) -> ResidueCoefficients:
    _check_simple(expansions, resonance)
    expansion = _band(expansions, resonance.band)
    terms = expansion.terms(resonance.lam)
    coefficients = expansion.membership.T @ terms
    denominator = zeta_inv(expansion, resonance.lam, "dlam")
    return ResidueCoefficients(resonance.band, coefficients, denominator)


def residue(
    expansions: Sequence[CycleExpansion],
    resonance: Resonance,
    weights: np.ndarray,
    key: Optional[str] = None,
) -> complex:
    """Res Z_f at ``resonance`` = -k0 * d_beta(1/zeta_k0) / d_lam(1/zeta_k0).

    ``weights`` are the orbit integrals A_p of the observable, aligned with
    the orbit table. With ``key`` the value is cached on the resonance.
    """
    if key is not None and key in resonance.residue_cache:
        return resonance.residue_cache[key]
    _check_simple(expansions, resonance)
    expansion = _band(expansions, resonance.band)
    dbeta = zeta_inv(expansion, resonance.lam, "dbeta", weights)
    dlam = zeta_inv(expansion, resonance.lam, "dlam")
    value = -resonance.band * dbeta / dlam
    if key is not None:
        resonance.residue_cache[key] = value
    return value


def default_contour_radius(lam0: complex, others: Sequence[complex] = ()) -> float:
    """min(0.1, half the distance to the nearest other zero)."""
    distances = [abs(z - lam0) for z in others if abs(z - lam0) > 0]
    return min([0.1] + [0.5 * d for d in distances])


def _winding_on_circle(expansion: CycleExpansion, lam0: complex, radius: float, nodes: int) -> int:
    theta = 2.0 * np.pi * np.arange(4 * nodes + 1) / (4 * nodes)
    values = zeta_inv(expansion, lam0 + radius * np.exp(1j * theta), "value")
    if np.any(values == 0):
        raise ContourError(f"Band {expansion.band} vanishes on the contour around {lam0}")
    steps = np.angle(values[1:] / values[:-1])
    if np.max(np.abs(steps)) > np.pi / 2:
        raise ContourError(f"Contour around {lam0} passes too close to a zero of band {expansion.band}")
    return int(round(steps.sum() / (2.0 * np.pi)))


def _trapezoid(expansions, lam0, order, weights, radius, nodes) -> complex:
    offsets = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    values = weighted_zeta_many(expansions, lam0 + offsets, weights)
    return complex(np.mean(values * offsets ** (order + 1)))


def laurent_coefficient(
    expansions: Sequence[CycleExpansion],
    lam0: complex,
    order: int,
    weights: np.ndarray,
    radius: Optional[float] = None,
    nodes: int = DEFAULT_CONTOUR_NODES,
    multiplicity: int = 1,
) -> complex:
    """(2 pi i)^-1 times the contour integral of Z_f(lam) (lam - lam0)^order.

    The circle must enclose only the zero at ``lam0`` (with total multiplicity
    ``multiplicity`` over all bands). ``nodes`` is doubled until two successive
    trapezoidal sums agree to 1e-8 relative.
    """
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    if nodes < 32:
        raise ValueError(f"Need at least 32 contour nodes, got {nodes}")
    lam0 = complex(lam0)
    radius = default_contour_radius(lam0) if radius is None else radius

    enclosed = sum(_winding_on_circle(e, lam0, radius, nodes) for e in expansions)
    if enclosed != multiplicity:
        raise ContourError(
            f"Contour of radius {radius:g} around {lam0} encloses {enclosed} zero(s), "
            f"expected {multiplicity}"
        )

    previous = _trapezoid(expansions, lam0, order, weights, radius, nodes)
    while nodes < MAX_CONTOUR_NODES:
        nodes *= 2
        current = _trapezoid(expansions, lam0, order, weights, radius, nodes)
        scale = max(1.0, abs(current))
        if abs(current - previous) <= RICHARDSON_TOL * scale:
            return current
        previous = current
    logger.warning("Laurent coefficient at %s did not settle with %d nodes; result unreliable",
                   lam0, nodes)
    return previous


__all__ = [
    "ResidueCoefficients",
    "default_contour_radius",
    "laurent_coefficient",
    "residue",
    "residue_coefficients",
]
