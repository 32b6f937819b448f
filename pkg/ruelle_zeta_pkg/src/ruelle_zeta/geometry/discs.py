"""Symmetric 3-disc scatterer: free flight, specular reflection, Birkhoff coordinates."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..constants import (
    BOUNDARY_TOL,
    GRAMMAR_WARN_D_OVER_R,
    GRAZING_TOL,
    HIT_EPS,
    TRIANGLE_TOL,
)
from ..errors import ConfigError, DegenerateHitError
from .symmetry import GroupElement, folding_element

logger = logging.getLogger(__name__)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A point of the unit sphere bundle: planar position and unit direction."""

    position: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        position = _frozen(self.position)
        direction = _frozen(self.direction)
        if position.shape != (2,) or direction.shape != (2,):
            raise ValueError("PhasePoint expects 2-vectors")
        if abs(math.hypot(direction[0], direction[1]) - 1.0) > 1e-14:
            raise ValueError(f"Direction is not a unit vector: {direction}")
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "direction", direction)

    @classmethod
    def from_angle(cls, position, angle: float) -> "PhasePoint":
        return cls(position, (math.cos(angle), math.sin(angle)))

    def transformed(self, g: GroupElement) -> "PhasePoint":
        return PhasePoint(g.act(self.position), g.act(self.direction))

    def reversed(self) -> "PhasePoint":
        return PhasePoint(self.position, -self.direction)


@dataclass(frozen=True)
class SectionPoint:
    """Birkhoff coordinates (q, p) of a bounce on ``disc``."""

    q: float
    p: float
    disc: int = 0

    def __post_init__(self):
        if not -math.pi - 1e-12 <= self.q <= math.pi + 1e-12:
            raise ValueError(f"q={self.q} outside [-pi, pi]")
        if not -1.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [-1, 1]")
        if self.disc not in (0, 1, 2):
            raise ValueError(f"Unknown disc index {self.disc}")


@dataclass(frozen=True)
class Reflection:
    """Outcome of one free flight ending on a disc."""

    disc: int
    flight_length: float
    point: PhasePoint


@dataclass(frozen=True)
class DiscSystem:
    """Three discs of radius ``r`` on an equilateral triangle of side ``d_over_r * r``.

    The triangle centroid is the origin and disc ``i`` sits at polar angle
    ``2*pi*i/3``.
    """

    d_over_r: float
    r: float = 1.0
    reference_disc: int = 0
    centers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.d_over_r > 2.0:
            raise ConfigError(f"d/r must exceed 2 for disjoint discs, got {self.d_over_r}")
        if not self.r > 0.0:
            raise ConfigError(f"Disc radius must be positive, got {self.r}")
        if self.reference_disc not in (0, 1, 2):
            raise ConfigError(f"reference_disc must be 0, 1 or 2, got {self.reference_disc}")
        if self.d_over_r < GRAMMAR_WARN_D_OVER_R:
            logger.warning(
                "d/r = %.4g < %.1f: the binary symbolic coding may be incomplete (pruned orbits)",
                self.d_over_r, GRAMMAR_WARN_D_OVER_R,
            )

        radius = self.d / math.sqrt(3.0)
        angles = [2.0 * math.pi * i / 3.0 for i in range(3)]
        centers = _frozen([[radius * math.cos(a), radius * math.sin(a)] for a in angles])
        object.__setattr__(self, "centers", centers)

        sides = [np.linalg.norm(centers[i] - centers[(i + 1) % 3]) for i in range(3)]
        if max(abs(s - self.d) for s in sides) > TRIANGLE_TOL * self.d:
            raise ConfigError(f"Disc centres do not form an equilateral triangle: {sides}")

    @property
    def d(self) -> float:
        return self.d_over_r * self.r

    def center_angle(self, disc: int) -> float:
        return 2.0 * math.pi * disc / 3.0

    def origin_angle(self, disc: int) -> float:
        """Boundary angle of the Birkhoff origin (the point facing the centroid)."""
        return self.center_angle(disc) + math.pi

    def boundary_point(self, disc: int, angle: float) -> np.ndarray:
        c = self.centers[disc]
        return np.array([c[0] + self.r * math.cos(angle), c[1] + self.r * math.sin(angle)])

    def disc_at(self, position, tol: float = BOUNDARY_TOL) -> Optional[int]:
        """Index of the disc whose boundary carries ``position``, if any."""
        distances = np.hypot(*(np.asarray(position, dtype=float) - self.centers).T)
        hits = np.flatnonzero(np.abs(distances - self.r) <= tol * self.r)
        return int(hits[0]) if hits.size else None

    def is_outside(self, position, tol: float = BOUNDARY_TOL) -> bool:
        distances = np.hypot(*(np.asarray(position, dtype=float) - self.centers).T)
        return bool(np.all(distances >= self.r * (1.0 - tol)))


def reflect(direction: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Specular reflection v' = v - 2<v,n>n, renormalized to unit length."""
    reflected = direction - 2.0 * float(np.dot(direction, normal)) * normal
    return reflected / math.hypot(reflected[0], reflected[1])


def next_reflection(system: DiscSystem, x: PhasePoint) -> Optional[Reflection]:
    """Follow the ray from ``x`` to the next disc; ``None`` when it escapes."""
    pos, v = x.position, x.direction
    if not system.is_outside(pos):
        raise ValueError(f"Phase point {pos} lies inside a disc")
    start_disc = system.disc_at(pos)
    if start_disc is not None:
        n = (pos - system.centers[start_disc]) / system.r
        if float(np.dot(v, n)) < -GRAZING_TOL:
            raise ValueError("Direction points into the disc carrying the start point")

    rel = pos - system.centers
    b = rel @ v
    c = np.einsum("ij,ij->i", rel, rel) - system.r ** 2
    discriminant = b * b - c

    best: Optional[Tuple[float, int]] = None
    for i in range(3):
        if i == start_disc or b[i] >= 0.0 or discriminant[i] < 0.0:
            continue
        t = -b[i] - math.sqrt(discriminant[i])
        if t <= HIT_EPS * system.r:
            continue
        if best is None or t < best[0]:
            best = (t, i)

    if best is None:
        return None

    t, disc = best
    hit = pos + t * v
    rel_hit = hit - system.centers[disc]
    normal = rel_hit / math.hypot(rel_hit[0], rel_hit[1])
    cos_incidence = float(np.dot(v, normal))
    if abs(cos_incidence) < GRAZING_TOL:
        raise DegenerateHitError(f"Tangential hit on disc {disc} at {hit}")
    return Reflection(disc=disc, flight_length=t, point=PhasePoint(hit, reflect(v, normal)))


def _wrap_angle(angle: float) -> float:
    wrapped = (angle + math.pi) % (2.0 * math.pi) - math.pi
    return wrapped


def to_birkhoff(system: DiscSystem, x: PhasePoint, disc: Optional[int] = None) -> SectionPoint:
    """Birkhoff coordinates of a phase point sitting on a disc boundary."""
    if disc is None:
        disc = system.disc_at(x.position)
        if disc is None:
            raise ValueError(f"Position {x.position} is not on any disc boundary")
    elif system.disc_at(x.position) != disc:
        raise ValueError(f"Position {x.position} is not on the boundary of disc {disc}")

    rel = x.position - system.centers[disc]
    angle = math.atan2(rel[1], rel[0])
    q = _wrap_angle(angle - system.origin_angle(disc))
    tangent = np.array([-math.sin(angle), math.cos(angle)])
    p = float(np.clip(np.dot(x.direction, tangent), -1.0, 1.0))
    return SectionPoint(q=q, p=p, disc=disc)


def from_birkhoff(system: DiscSystem, s: SectionPoint) -> PhasePoint:
    """Outgoing phase point for Birkhoff coordinates ``s``."""
    if abs(s.p) >= 1.0:
        raise ValueError("|p| = 1 is a tangent direction; no unique outgoing point")
    angle = system.origin_angle(s.disc) + s.q
    normal = np.array([math.cos(angle), math.sin(angle)])
    tangent = np.array([-math.sin(angle), math.cos(angle)])
    direction = s.p * tangent + math.sqrt(1.0 - s.p * s.p) * normal
    direction /= math.hypot(direction[0], direction[1])
    return PhasePoint(system.boundary_point(s.disc, angle), direction)


def fold_to_fundamental(system: DiscSystem, x: PhasePoint) -> Tuple[PhasePoint, GroupElement]:
    """Fold ``x`` into the wedge 0 <= polar angle <= pi/3.

    Returns the folded point and the element ``g`` with ``g . x == folded``;
    ``g.inverse()`` maps the folded point back onto ``x``.
    """
    g = folding_element(x.position)
    return x.transformed(g), g


__all__ = [
    "DiscSystem",
    "PhasePoint",
    "SectionPoint",
    "Reflection",
    "reflect",
    "next_reflection",
    "to_birkhoff",
    "from_birkhoff",
    "fold_to_fundamental",
]
