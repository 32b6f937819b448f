"""Observables integrated along periodic orbits.

``orbit_weight`` returns A_p, the integral of an observable over one primitive
period. For fundamental-domain cycles the observable is averaged over the six
C3v images, so that one fundamental period of any invariant observable equals
the full-domain integral divided by ``m``.

SectionComb is the exception: ``section_weight`` sums the comb over every
bounce of the six images that lands on the reference disc instead of
averaging, so a comb weight is six times what the averaging convention
would give. Distribution grids carry that common factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad

from ..geometry.discs import DiscSystem, PhasePoint
from ..geometry.symmetry import C3V
from .solver import PeriodicOrbit

# half-width of the position support of PhaseGaussian, in units of its width
SUPPORT_WIDTHS = 3.0
_Q_SHIFTS = (-2.0 * math.pi, 0.0, 2.0 * math.pi)


@dataclass(frozen=True)
class ConstantOne:
    """f = 1; A_p is the period."""


@dataclass(frozen=True, eq=False)
class PhaseGaussian:
    """Gaussian bump in position and direction around ``center``.

    The position factor is a Gaussian of width ``widths[0]`` multiplied by a
    smooth cutoff that vanishes with all derivatives at ``SUPPORT_WIDTHS``
    widths. ``widths[1]`` is the width in the direction vector; ``math.inf``
    removes the direction dependence.
    """

    center: PhasePoint
    widths: Tuple[float, float] = (0.5, math.inf)

    def __post_init__(self):
        if not (self.widths[0] > 0 and self.widths[1] > 0):
            raise ValueError(f"Gaussian widths must be positive, got {self.widths}")

    @property
    def support_radius(self) -> float:
        return SUPPORT_WIDTHS * self.widths[0]

    def profile(self, rho: np.ndarray) -> np.ndarray:
        s2 = (np.asarray(rho) / SUPPORT_WIDTHS) ** 2
        inside = s2 < 1.0
        out = np.zeros_like(s2, dtype=float)
        out[inside] = np.exp(-0.5 * np.asarray(rho)[inside] ** 2 + 1.0 - 1.0 / (1.0 - s2[inside]))
        return out

    def direction_factor(self, direction: np.ndarray, center_direction: np.ndarray) -> float:
        if math.isinf(self.widths[1]):
            return 1.0
        diff = direction - center_direction
        return math.exp(-float(np.dot(diff, diff)) / (2.0 * self.widths[1] ** 2))


@dataclass(frozen=True, eq=False)
class FlowDerivative:
    """X f for a PhaseGaussian f: the derivative along free flight."""

    inner: PhaseGaussian

    def check_admissible(self, system: DiscSystem) -> None:
        """The support must avoid every disc, or the orbit integral does not telescope."""
        gap = np.linalg.norm(system.centers - self.inner.center.position, axis=1) - system.r
        if np.any(gap <= self.inner.support_radius):
            raise ValueError(
                f"FlowDerivative support (radius {self.inner.support_radius:.3g}) touches a disc"
            )


@dataclass(frozen=True)
class SectionComb:
    """Periodized Gaussian of width ``sigma`` at (q0, p0) on the reference section."""

    q0: float
    p0: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True, eq=False)
class LinearCombination:
    """sum_i c_i f_i; an empty combination is the zero observable."""

    terms: Tuple[Tuple[float, "WeightSpec"], ...] = ()


WeightSpec = Union[ConstantOne, PhaseGaussian, FlowDerivative, SectionComb, LinearCombination]


def wrapped_gaussian(dq: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian in q summed over three periodic images."""
    dq = np.asarray(dq, dtype=float)
    return sum(np.exp(-((dq + shift) ** 2) / (2.0 * sigma * sigma)) for shift in _Q_SHIFTS)


def section_weight(orbit: PeriodicOrbit, comb: SectionComb) -> float:
    if not orbit.section_bounces:
        return 0.0
    q = np.array([b.q for b in orbit.section_bounces])
    p = np.array([b.p for b in orbit.section_bounces])
    gq = wrapped_gaussian(q - comb.q0, comb.sigma)
    gp = np.exp(-((p - comb.p0) ** 2) / (2.0 * comb.sigma ** 2))
    return float(np.sum(gq * gp)) / (2.0 * math.pi * comb.sigma ** 2)


def _segment_window(start: np.ndarray, u: np.ndarray, length: float, center: np.ndarray, radius: float):
    """Sub-interval of a flight inside the ball |x - center| <= radius, or None."""
    rel = start - center
    b = float(np.dot(rel, u))
    disc = b * b - (float(np.dot(rel, rel)) - radius * radius)
    if disc <= 0.0:
        return None
    root = math.sqrt(disc)
    lo, hi = max(0.0, -b - root), min(length, -b + root)
    return (lo, hi) if hi > lo else None


def _gaussian_integrals(
    orbit: PeriodicOrbit, f: PhaseGaussian, derivative: bool, images: Sequence
) -> float:
    width = f.widths[0]
    steps = orbit.length if orbit.domain == "fundamental" else len(orbit.labels)
    total = 0.0
    for g in images:
        center = g.inverse().act(f.center.position)
        center_dir = g.inverse().act(f.center.direction)
        for k in range(steps):
            start, u, ell = orbit.points[k], orbit.directions[k], float(orbit.flight_lengths[k])
            window = _segment_window(start, u, ell, center, f.support_radius)
            if window is None:
                continue
            dir_factor = f.direction_factor(u, center_dir)
            offset = start - center
            drift = float(np.dot(u, offset))

            def integrand(t: float) -> float:
                rho = math.sqrt(float(np.dot(offset + t * u, offset + t * u))) / width
                value = float(f.profile(np.array([rho]))[0])
                if not derivative or value == 0.0:
                    return value
                s2 = (rho / SUPPORT_WIDTHS) ** 2
                radial = -1.0 - (2.0 / SUPPORT_WIDTHS ** 2) / (1.0 - s2) ** 2
                return value * radial * (drift + t) / (width * width)

            integral, _ = quad(integrand, window[0], window[1], epsabs=1e-13, epsrel=1e-12, limit=200)
            total += dir_factor * integral
    return total / len(images)


def orbit_weight(system: DiscSystem, orbit: PeriodicOrbit, f: WeightSpec) -> float:
    """A_p: integral of ``f`` over one primitive period of ``orbit``."""
    images = C3V if orbit.domain == "fundamental" else (C3V[0],)
    if isinstance(f, ConstantOne):
        return orbit.period
    if isinstance(f, PhaseGaussian):
        return _gaussian_integrals(orbit, f, False, images)
    if isinstance(f, FlowDerivative):
        f.check_admissible(system)
        return _gaussian_integrals(orbit, f.inner, True, images)
    if isinstance(f, SectionComb):
        return section_weight(orbit, f)
    if isinstance(f, LinearCombination):
        return sum(c * orbit_weight(system, orbit, term) for c, term in f.terms)
    raise TypeError(f"Unsupported observable {type(f).__name__}")


def orbit_weights(system: DiscSystem, orbits: Iterable[PeriodicOrbit], f: WeightSpec) -> np.ndarray:
    return np.array([orbit_weight(system, orbit, f) for orbit in orbits], dtype=float)


__all__ = [
    "ConstantOne",
    "FlowDerivative",
    "LinearCombination",
    "PhaseGaussian",
    "SectionComb",
    "WeightSpec",
    "orbit_weight",
    "orbit_weights",
    "section_weight",
    "wrapped_gaussian",
]
