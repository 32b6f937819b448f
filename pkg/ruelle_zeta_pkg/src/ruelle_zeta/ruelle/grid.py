"""Smoothed invariant Ruelle distributions on the Birkhoff section of the reference disc.

The value at a node (q0, p0) is the residue of Z_f at the resonance for f a
Gaussian comb centered on that node. Residues are linear in the orbit weights,
so one set of per-prime coefficients serves the whole grid.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import maximum_filter

from ..errors import ConfigError, NonSimpleResonanceError
from ..geometry.discs import DiscSystem
from ..orbits.solver import PeriodicOrbit
from ..orbits.weights import SectionComb, orbit_weights, wrapped_gaussian
from ..resonances.residues import laurent_coefficient, residue_coefficients
from ..resonances.scan import Resonance
from ..zeta.expansion import CycleExpansion

logger = logging.getLogger(__name__)

MAX_GRID = (2000, 1000)


class GridSpec(NamedTuple):
    n_q: int = 400
    n_p: int = 200

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        try:
            n_q, n_p = (int(v) for v in text.lower().split("x"))
        except ValueError as exc:
            raise ConfigError(f"Grid '{text}' must look like NQxNP") from exc
        return cls(n_q, n_p).checked()

    def checked(self) -> "GridSpec":
        if not (2 <= self.n_q <= MAX_GRID[0] and 2 <= self.n_p <= MAX_GRID[1]):
            raise ConfigError(f"Grid {self.n_q}x{self.n_p} outside 2x2 .. {MAX_GRID[0]}x{MAX_GRID[1]}")
        return self

    @property
    def q(self) -> np.ndarray:
        return np.linspace(-math.pi, math.pi, self.n_q)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.n_p)


@dataclass(frozen=True, eq=False)
class DistributionGrid:
    """Complex residue values on a (p, q) grid; ``values[i, j]`` sits at (q[j], p[i])."""

    q: np.ndarray
    p: np.ndarray
    sigma: float
    lam0: complex
    band: int
    values: np.ndarray
    mask: Optional[np.ndarray] = None

    @property
    def re_min(self) -> float:
        return float(self.values.real.min())

    @property
    def re_max(self) -> float:
        return float(self.values.real.max())

    @property
    def abs_re_range(self) -> Tuple[float, float]:
        """Smallest and largest |Re value|; recorded next to the PGM."""
        magnitude = np.abs(self.values.real)
        return float(magnitude.min()), float(magnitude.max())


def _bounce_arrays(orbits: Sequence[PeriodicOrbit]):
    owner, q, p = [], [], []
    for index, orbit in enumerate(orbits):
        for bounce in orbit.section_bounces:
            owner.append(index)
            q.append(bounce.q)
            p.append(bounce.p)
    return np.array(owner, dtype=int), np.array(q, dtype=float), np.array(p, dtype=float)


def distribution_grid(
    system: DiscSystem,
    orbits: Sequence[PeriodicOrbit],
    expansions: Sequence[CycleExpansion],
    resonance: Resonance,
    grid: GridSpec,
    sigma: float,
    *,
    sigma_p: Optional[float] = None,
    with_mask: bool = True,
    allow_contour: bool = False,
) -> DistributionGrid:
    """Residue of Z_f at ``resonance`` for section Gaussians centered on every grid node."""
    grid = GridSpec(*grid).checked()
    if not sigma > 0:
        raise ConfigError(f"sigma must be positive, got {sigma}")
    if sigma > 1.0:
        logger.warning("sigma = %g > 1: three periodic images no longer make q periodic to roundoff", sigma)
    sigma_p = sigma if sigma_p is None else sigma_p
    q_nodes, p_nodes = grid.q, grid.p

    try:
        coeffs = residue_coefficients(expansions, resonance)
    except NonSimpleResonanceError:
        if not allow_contour:
            raise
        logger.warning("Non-simple zero at %s: integrating %d contours, this is slow",
                       resonance.lam, grid.n_q * grid.n_p)
        values = _contour_grid(system, orbits, expansions, resonance, q_nodes, p_nodes, sigma)
    else:
        owner, q_b, p_b = _bounce_arrays(orbits)
        scale = -coeffs.band / coeffs.denominator / (2.0 * math.pi * sigma * sigma_p)
        if owner.size:
            weight_b = coeffs.coefficients[owner]
            g_q = wrapped_gaussian(q_nodes[None, :] - q_b[:, None], sigma)
            g_p = np.exp(-((p_nodes[None, :] - p_b[:, None]) ** 2) / (2.0 * sigma_p ** 2))
            values = scale * ((g_p * weight_b[:, None]).T @ g_q)
        else:
            values = np.zeros((grid.n_p, grid.n_q), dtype=complex)

    mask = sigma1_mask(system, grid) if with_mask else None
    return DistributionGrid(q_nodes, p_nodes, sigma, resonance.lam, resonance.band, values, mask)


def _contour_grid(system, orbits, expansions, resonance, q_nodes, p_nodes, sigma) -> np.ndarray:
    values = np.empty((p_nodes.size, q_nodes.size), dtype=complex)
    for i, p0 in enumerate(p_nodes):
        for j, q0 in enumerate(q_nodes):
            weights = orbit_weights(system, orbits, SectionComb(q0, p0, sigma))
            values[i, j] = laurent_coefficient(
                expansions, resonance.lam, 0, weights, multiplicity=resonance.order
            )
    return values


def sigma1_mask(system: DiscSystem, grid: GridSpec) -> np.ndarray:
    """Nodes whose outgoing or time-reversed ray reflects off another disc.

    ``|p| = 1`` and grazing hits are outside the mask.
    """
    grid = GridSpec(*grid).checked()
    q, p = np.meshgrid(grid.q, grid.p)
    return in_sigma1(system, q, p)


def in_sigma1(system: DiscSystem, q, p) -> np.ndarray:
    """Elementwise membership of Birkhoff points (q, p) in the mask."""
    q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    interior = np.abs(p) < 1.0
    return interior & (_reflects(system, q, p) | _reflects(system, q, -p))


def _reflects(system: DiscSystem, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Vectorized next_reflection(...) is not None for rays leaving the reference disc."""
    ref = system.reference_disc
    angle = system.origin_angle(ref) + q
    normal = np.stack([np.cos(angle), np.sin(angle)], axis=-1)
    tangent = np.stack([-np.sin(angle), np.cos(angle)], axis=-1)
    root = np.sqrt(np.clip(1.0 - p * p, 0.0, None))
    v = p[..., None] * tangent + root[..., None] * normal
    x = system.centers[ref] + system.r * normal

    hit = np.zeros(q.shape, dtype=bool)
    for disc in range(3):
        if disc == ref:
            continue
        rel = x - system.centers[disc]
        b = np.einsum("...i,...i->...", rel, v)
        c = np.einsum("...i,...i->...", rel, rel) - system.r ** 2
        disc_sq = b * b - c
        ahead = (b < 0.0) & (disc_sq >= 0.0)
        t = -b - np.sqrt(np.clip(disc_sq, 0.0, None))
        point = x + t[..., None] * v
        n_hit = (point - system.centers[disc]) / system.r
        cos_incidence = np.abs(np.einsum("...i,...i->...", v, n_hit))
        hit |= ahead & (t > 1e-12 * system.r) & (cos_incidence >= 1e-12)
    return hit


def localization_metric(grid: DistributionGrid, delta: int) -> float:
    """Share of sum |Re values| carried by nodes within ``delta`` cells of the mask.

    Computed as one minus the share of the nodes farther away, so the value
    stays in [0, 1] and reaches 1 exactly once no mass is left outside.
    Distances are Chebyshev in node units; q wraps around, p does not.
    """
    if grid.mask is None or not grid.mask.any():
        raise ValueError("localization_metric needs a non-empty Sigma_1 mask")
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    weight = np.abs(grid.values.real)
    total = float(weight.sum())
    if total == 0.0:
        raise ValueError("Grid carries no mass")
    near = maximum_filter(grid.mask.astype(np.uint8), size=2 * delta + 1, mode=("nearest", "wrap")) > 0
    far = float(weight[~near].sum())
    return min(1.0, max(0.0, 1.0 - far / total))


__all__ = [
    "DistributionGrid",
    "GridSpec",
    "distribution_grid",
    "in_sigma1",
    "localization_metric",
    "sigma1_mask",
]
