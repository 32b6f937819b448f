"""Transverse monodromy and stability eigenvalues of periodic billiard orbits.

Tangent vectors are written in (transverse displacement, angle) coordinates
relative to the velocity. A free flight of length L acts as [[1, L], [0, 1]],
a reflection with incidence angle phi on a disc of radius r as
-[[1, 0], [2/(r cos phi), 1]]. A mirror symmetry acts as -I.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from ..constants import HYPERBOLICITY_TOL
from ..errors import HyperbolicityError
from ..geometry.symmetry import GroupElement

if TYPE_CHECKING:  # pragma: no cover
    from ..geometry.discs import DiscSystem
    from .solver import PeriodicOrbit


def flight_matrix(length: float) -> np.ndarray:
    return np.array([[1.0, length], [0.0, 1.0]])


def reflection_matrix(radius: float, cos_incidence: float) -> np.ndarray:
    return -np.array([[1.0, 0.0], [2.0 / (radius * cos_incidence), 1.0]])


def compose_monodromy(
    radius: float,
    flights: np.ndarray,
    cos_incidence: np.ndarray,
    steps: int,
    h: Optional[GroupElement] = None,
) -> np.ndarray:
    """Product over ``steps`` flights, each followed by the reflection that ends it.

    ``cos_incidence[k]`` belongs to the bounce that starts flight ``k``, so
    flight ``k`` ends on bounce ``(k + 1) mod N``.
    """
    n_bounces = len(flights)
    matrix = np.eye(2)
    for k in range(steps):
        nxt = (k + 1) % n_bounces
        matrix = reflection_matrix(radius, cos_incidence[nxt]) @ flight_matrix(flights[k]) @ matrix
    if h is not None and h.reflected:
        matrix = -matrix
    return matrix


def monodromy_determinant(
    radius: float,
    flights: np.ndarray,
    cos_incidence: np.ndarray,
    steps: int,
    h: Optional[GroupElement] = None,
) -> float:
    """Determinant of the composed monodromy as the product of its factors.

    Entries of the composed matrix grow like |Lambda|; its direct
    determinant is noise once |Lambda| ~ 1e8.
    """
    n_bounces = len(flights)
    det = 1.0
    for k in range(steps):
        nxt = (k + 1) % n_bounces
        det *= float(np.linalg.det(reflection_matrix(radius, cos_incidence[nxt])))
        det *= float(np.linalg.det(flight_matrix(flights[k])))
    if h is not None and h.reflected:
        det *= float(np.linalg.det(-np.eye(2)))
    return det


def stability_of(matrix: np.ndarray, det: Optional[float] = None) -> Tuple[float, int]:
    """Expanding eigenvalue and its sign; raises if the matrix is not hyperbolic.

    Pass ``det`` from monodromy_determinant for long orbits.
    """
    trace = float(matrix[0, 0] + matrix[1, 1])
    if det is None:
        det = float(np.linalg.det(matrix))
    discriminant = trace * trace - 4.0 * det
    if discriminant <= 0.0:
        raise HyperbolicityError(f"Monodromy with trace {trace:.6g} is elliptic or parabolic")
    expanding = 0.5 * (trace + math.copysign(math.sqrt(discriminant), trace))
    if abs(expanding) <= 1.0 + HYPERBOLICITY_TOL:
        raise HyperbolicityError(f"|Lambda| = {abs(expanding):.6g} does not exceed 1")
    return expanding, 1 if expanding > 0 else -1


def monodromy_of(system: "DiscSystem", orbit: "PeriodicOrbit") -> Tuple[np.ndarray, float, int]:
    """Monodromy over one primitive period, the expanding eigenvalue and its sign."""
    cos_incidence = np.einsum("ij,ij->i", orbit.directions, orbit.normals)
    if orbit.cycle.domain == "fundamental":
        steps, h = orbit.length, orbit.h
    else:
        steps, h = len(orbit.flight_lengths), None
    matrix = compose_monodromy(system.r, orbit.flight_lengths, cos_incidence, steps, h)
    det = monodromy_determinant(system.r, orbit.flight_lengths, cos_incidence, steps, h)
    stability, sign = stability_of(matrix, det)
    return matrix, stability, sign


__all__ = [
    "compose_monodromy",
    "flight_matrix",
    "monodromy_determinant",
    "monodromy_of",
    "reflection_matrix",
    "stability_of",
]
