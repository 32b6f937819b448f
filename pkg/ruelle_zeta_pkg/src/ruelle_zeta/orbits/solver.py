"""Periodic orbits of the 3-disc billiard as critical points of the length functional.

Each bounce ``k`` is parameterized by its boundary angle ``theta_k`` on disc
``a_k``; the periodic orbit for a closed label sequence minimizes the total
chord length. Fundamental-domain cycles are solved in the full domain on their
unfolded itinerary and reduced afterwards.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..constants import GRADIENT_TOL, GRAZING_TOL, NEWTON_MAX_ITER
from ..errors import NumericalError, OrbitNotConvergedError, ShadowedOrbitError
from ..geometry.discs import DiscSystem, PhasePoint, SectionPoint, next_reflection, to_birkhoff
from ..geometry.symmetry import C3V, GroupElement
from ..symbolic.cycles import PrimeCycle, unfold
from .stability import compose_monodromy, monodromy_determinant, stability_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PeriodicOrbit:
    """A solved prime cycle.

    ``points[k]`` is bounce ``k`` of the closed full-domain orbit and
    ``directions[k]`` the outgoing unit velocity there. ``period`` and
    ``stability`` refer to the primitive cycle in its own domain.
    """

    cycle: PrimeCycle
    labels: Tuple[int, ...]
    angles: np.ndarray
    points: np.ndarray
    directions: np.ndarray
    flight_lengths: np.ndarray
    period: float
    monodromy: np.ndarray
    determinant: float
    stability: float
    sign: int
    full_stability: float
    m: int
    h: Optional[GroupElement]
    section_bounces: Tuple[SectionPoint, ...]
    residual: float
    hessian_min_eigenvalue: float

    @property
    def length(self) -> int:
        return self.cycle.length

    @property
    def word(self) -> str:
        return self.cycle.symbols

    @property
    def domain(self) -> str:
        return self.cycle.domain

    @property
    def full_period(self) -> float:
        return float(self.flight_lengths.sum())

    @property
    def incidence_angles(self) -> np.ndarray:
        """Incidence angles at the bounces of the primitive cycle."""
        cos_phi = np.clip(np.einsum("ij,ij->i", self.directions, self.normals), -1.0, 1.0)
        return np.arccos(cos_phi[: self.length])

    @property
    def normals(self) -> np.ndarray:
        """Outward unit normals at the bounces."""
        return np.stack([np.cos(self.angles), np.sin(self.angles)], axis=1)


def _initial_angles(system: DiscSystem, labels: Tuple[int, ...]) -> np.ndarray:
    """Bisector of the directions towards the neighbouring disc centres."""
    centers = system.centers[list(labels)]
    prev_dir = np.roll(centers, 1, axis=0) - centers
    next_dir = np.roll(centers, -1, axis=0) - centers
    prev_dir /= np.linalg.norm(prev_dir, axis=1, keepdims=True)
    next_dir /= np.linalg.norm(next_dir, axis=1, keepdims=True)
    bisector = prev_dir + next_dir
    # a two-bounce orbit has opposite neighbours on the same disc pair
    degenerate = np.linalg.norm(bisector, axis=1) < 1e-12
    bisector[degenerate] = next_dir[degenerate]
    return np.arctan2(bisector[:, 1], bisector[:, 0])


def length_functional(
    system: DiscSystem, labels: Tuple[int, ...], theta: np.ndarray
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Total chord length with its analytic gradient and Hessian in the angles."""
    r = system.r
    n = len(labels)
    normals = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    tangents = r * np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    points = system.centers[list(labels)] + r * normals

    edges = np.roll(points, -1, axis=0) - points
    ell = np.linalg.norm(edges, axis=1)
    u = edges / ell[:, None]
    total = float(ell.sum())

    along_out = np.einsum("ij,ij->i", tangents, u)
    along_in = np.einsum("ij,ij->i", tangents, np.roll(u, 1, axis=0))
    gradient = along_in - along_out

    hessian = np.zeros((n, n))
    for k in range(n):
        j = (k + 1) % n
        uk, lk = u[k], ell[k]
        ti, tj = tangents[k], tangents[j]

        def perp(a, b):
            return float(np.dot(a, b) - np.dot(uk, a) * np.dot(uk, b))

        hessian[k, k] += perp(ti, ti) / lk + r * float(np.dot(uk, normals[k]))
        hessian[j, j] += perp(tj, tj) / lk - r * float(np.dot(uk, normals[j]))
        off = -perp(ti, tj) / lk
        hessian[k, j] += off
        hessian[j, k] += off
    return total, gradient, hessian


def _newton(system: DiscSystem, labels: Tuple[int, ...], word: str) -> Tuple[np.ndarray, float]:
    theta = _initial_angles(system, labels)
    tol = GRADIENT_TOL * system.r
    for iteration in range(NEWTON_MAX_ITER):
        total, gradient, hessian = length_functional(system, labels, theta)
        residual = float(np.max(np.abs(gradient)))
        if residual <= tol:
            logger.debug("Orbit %s converged after %d iterations", word, iteration)
            return theta, residual
        try:
            np.linalg.cholesky(hessian)
            step = -np.linalg.solve(hessian, gradient)
            positive = True
        except np.linalg.LinAlgError:
            step = -gradient
            positive = False
        if positive and residual < 1e-3 * system.r:
            theta = theta + step
            continue
        # damped step on the length itself far from the minimum
        alpha, slope = 1.0, float(np.dot(gradient, step))
        while alpha > 1e-10:
            trial = theta + alpha * step
            if length_functional(system, labels, trial)[0] <= total + 1e-4 * alpha * slope:
                break
            alpha *= 0.5
        theta = theta + alpha * step
    raise OrbitNotConvergedError(
        f"Orbit {word} did not converge in {NEWTON_MAX_ITER} iterations (|grad| = {residual:.3e})"
    )


def _check_realizable(
    system: DiscSystem, labels: Tuple[int, ...], points: np.ndarray, u: np.ndarray,
    ell: np.ndarray, normals: np.ndarray, word: str,
) -> None:
    n = len(labels)
    outgoing = np.einsum("ij,ij->i", u, normals)
    incoming = np.einsum("ij,ij->i", np.roll(u, 1, axis=0), normals)
    if np.any(outgoing <= GRAZING_TOL) or np.any(incoming >= -GRAZING_TOL):
        raise ShadowedOrbitError(f"Orbit {word} does not reflect off the outside of its discs")
    for k in range(n):
        try:
            hit = next_reflection(system, PhasePoint(points[k], u[k]))
        except (ValueError, NumericalError) as exc:
            raise ShadowedOrbitError(f"Orbit {word} cannot be replayed from bounce {k}: {exc}") from exc
        nxt = (k + 1) % n
        if hit is None or hit.disc != labels[nxt] or abs(hit.flight_length - ell[k]) > 1e-9 * system.r:
            raise ShadowedOrbitError(f"Flight {k} of orbit {word} is blocked by another disc")


def _section_bounces(
    system: DiscSystem, cycle: PrimeCycle, labels: Tuple[int, ...],
    points: np.ndarray, u: np.ndarray,
) -> Tuple[SectionPoint, ...]:
    """Bounces of the orbit on the reference disc in Birkhoff coordinates.

    A fundamental cycle contributes every symmetry image of its bounces that
    lands on the reference disc, two per bounce.
    """
    ref = system.reference_disc
    bounces: List[SectionPoint] = []
    if cycle.domain == "full":
        for k, label in enumerate(labels):
            if label == ref:
                bounces.append(to_birkhoff(system, PhasePoint(points[k], u[k]), ref))
        return tuple(bounces)

    for k in range(cycle.length):
        x = PhasePoint(points[k], u[k])
        for g in C3V:
            if g.act_label(labels[k]) == ref:
                bounces.append(to_birkhoff(system, x.transformed(g), ref))
    return tuple(bounces)


def find_orbit(system: DiscSystem, cycle: PrimeCycle) -> PeriodicOrbit:
    """Solve the periodic orbit of ``cycle`` and its stability data."""
    if cycle.domain == "fundamental":
        unfolded = unfold(cycle)
        labels, h, m = unfolded.closure, unfolded.h, unfolded.m
    else:
        labels, h, m = tuple(int(ch) for ch in cycle.symbols), None, 1

    theta, residual = _newton(system, labels, cycle.symbols)
    _, _, hessian = length_functional(system, labels, theta)
    min_eig = float(np.linalg.eigvalsh(hessian).min())
    if min_eig <= 0.0:
        logger.warning("Orbit %s is a saddle of the length functional (min eigenvalue %.3e)",
                       cycle.symbols, min_eig)

    normals = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    points = system.centers[list(labels)] + system.r * normals
    edges = np.roll(points, -1, axis=0) - points
    ell = np.linalg.norm(edges, axis=1)
    u = edges / ell[:, None]
    _check_realizable(system, labels, points, u, ell, normals, cycle.symbols)

    cos_incidence = np.einsum("ij,ij->i", u, normals)
    steps = cycle.length if cycle.domain == "fundamental" else len(labels)
    monodromy = compose_monodromy(system.r, ell, cos_incidence, steps, h)
    determinant = monodromy_determinant(system.r, ell, cos_incidence, steps, h)
    stability, sign = stability_of(monodromy, determinant)
    full_stability, _ = stability_of(
        compose_monodromy(system.r, ell, cos_incidence, len(labels)),
        monodromy_determinant(system.r, ell, cos_incidence, len(labels)),
    )
    if abs(stability ** m - full_stability) > 1e-8 * abs(full_stability):
        logger.warning("Orbit %s: Lambda^m = %.12g differs from the full-orbit value %.12g",
                       cycle.symbols, stability ** m, full_stability)

    return PeriodicOrbit(
        cycle=cycle,
        labels=tuple(labels),
        angles=theta,
        points=points,
        directions=u,
        flight_lengths=ell,
        period=float(ell.sum()) / m,
        monodromy=monodromy,
        determinant=determinant,
        stability=stability,
        sign=sign,
        full_stability=full_stability,
        m=m,
        h=h,
        section_bounces=_section_bounces(system, cycle, labels, points, u),
        residual=residual,
        hessian_min_eigenvalue=min_eig,
    )


@dataclass(frozen=True)
class OrbitResult:
    """Outcome of solving one cycle; ``orbit`` is None when it failed."""

    cycle: PrimeCycle
    orbit: Optional[PeriodicOrbit]
    error: Optional[str] = None


def try_find_orbit(system: DiscSystem, cycle: PrimeCycle) -> OrbitResult:
    try:
        return OrbitResult(cycle, find_orbit(system, cycle))
    except NumericalError as exc:
        logger.warning("Cycle %s (%s): %s", cycle.symbols, cycle.domain, exc)
        return OrbitResult(cycle, None, f"{type(exc).__name__}: {exc}")


__all__ = [
    "OrbitResult",
    "PeriodicOrbit",
    "find_orbit",
    "length_functional",
    "try_find_orbit",
]
