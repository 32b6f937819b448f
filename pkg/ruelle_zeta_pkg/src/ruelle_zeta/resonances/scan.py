"""Zeros of the zeta bands in a rectangle of the complex plane.

Each band is scanned on a grid of square cells. The winding number of
1/zeta_k around a cell counts the zeros inside it; cells with a nonzero count
are subdivided until each holds a single (possibly multiple) zero, which
Newton's method then polishes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..constants import MAX_CELL_SIZE, MERGE_TOL, NEWTON_ZERO_TOL
from ..errors import ConfigError, NumericalError
from ..parallel import parallel_map
from ..zeta.expansion import CycleExpansion, OrbitLike, band_value_and_slope, build_expansion

logger = logging.getLogger(__name__)

# a zero closer than this to a cell edge forces a new dissection
BOUNDARY_ZERO_TOL = 1e-6
MAX_PHASE_STEP = math.pi / 4
MAX_SUBDIVISION_DEPTH = 10
REAL_SNAP_TOL = 1e-9
_GRID_SHIFTS = (0.1180339887, 0.3090169944, 0.0729490168)
_SPLITS = (0.5, 0.4142135624, 0.5857864376)


class Rectangle(NamedTuple):
    re0: float
    re1: float
    im0: float
    im1: float

    @classmethod
    def parse(cls, text: str) -> "Rectangle":
        try:
            values = [float(v) for v in text.split(",")]
        except ValueError as exc:
            raise ConfigError(f"Rectangle '{text}' is not four comma-separated numbers") from exc
        if len(values) != 4:
            raise ConfigError(f"Rectangle '{text}' needs re0,re1,im0,im1")
        return cls(*values).checked()

    def checked(self) -> "Rectangle":
        if not all(math.isfinite(v) for v in self):
            raise ConfigError(f"Rectangle {tuple(self)} is unbounded")
        if not (self.re0 < self.re1 and self.im0 < self.im1):
            raise ConfigError(f"Rectangle {tuple(self)} is empty or inverted")
        return self

    def contains(self, lam: complex, tol: float = 1e-9) -> bool:
        return (self.re0 - tol <= lam.real <= self.re1 + tol
                and self.im0 - tol <= lam.imag <= self.im1 + tol)

    def mirrored(self) -> "Rectangle":
        return Rectangle(self.re0, self.re1, -self.im1, -self.im0)


@dataclass(frozen=True, eq=False)
class Resonance:
    """A zero of band ``band`` of multiplicity ``order``."""

    lam: complex
    band: int
    order: int = 1
    residual: float = 0.0
    n_max: int = 0
    error_bar: Optional[float] = None
    residue_cache: Dict[str, complex] = field(default_factory=dict, repr=False)

    def conjugate(self) -> "Resonance":
        cache = {key: value.conjugate() for key, value in self.residue_cache.items()}
        return Resonance(self.lam.conjugate(), self.band, self.order, self.residual,
                         self.n_max, self.error_bar, cache)


class _BoundaryZero(Exception):
    """A zero sits on (or next to) the contour being tracked."""


def _edge_phase(expansion: CycleExpansion, a: complex, b: complex) -> float:
    """Change of arg(1/zeta) from ``a`` to ``b`` with adaptive refinement."""
    s = np.linspace(0.0, 1.0, 17)
    values, slopes = band_value_and_slope(expansion, a + s * (b - a))
    for _ in range(40):
        with np.errstate(divide="ignore", invalid="ignore"):
            near = np.abs(values) < BOUNDARY_ZERO_TOL * np.abs(slopes)
        if np.any(near) or np.any(values == 0):
            raise _BoundaryZero(f"zero within {BOUNDARY_ZERO_TOL} of segment {a} -> {b}")
        steps = np.angle(values[1:] / values[:-1])
        coarse = np.abs(steps) > MAX_PHASE_STEP
        if not coarse.any():
            return float(steps.sum())
        mids = 0.5 * (s[:-1][coarse] + s[1:][coarse])
        if np.min(np.diff(s)) < 1e-13:
            raise _BoundaryZero(f"phase cannot be resolved on segment {a} -> {b}")
        new_values, new_slopes = band_value_and_slope(expansion, a + mids * (b - a))
        s = np.concatenate([s, mids])
        order = np.argsort(s, kind="stable")
        s = s[order]
        values = np.concatenate([values, new_values])[order]
        slopes = np.concatenate([slopes, new_slopes])[order]
    raise _BoundaryZero(f"phase refinement did not settle on segment {a} -> {b}")


def winding_number(expansion: CycleExpansion, lo: complex, hi: complex) -> int:
    """Zeros of 1/zeta inside the rectangle with corners ``lo`` (lower left) and ``hi``."""
    corners = [lo, complex(hi.real, lo.imag), hi, complex(lo.real, hi.imag)]
    total = sum(_edge_phase(expansion, corners[i], corners[(i + 1) % 4]) for i in range(4))
    turns = total / (2.0 * math.pi)
    count = round(turns)
    if abs(turns - count) > 0.05:
        raise _BoundaryZero(f"non-integer winding {turns:.4f}")
    return int(count)


def newton_refine(
    expansion: CycleExpansion,
    seed: complex,
    order: int = 1,
    tol: float = NEWTON_ZERO_TOL,
    max_iter: int = 60,
) -> Tuple[complex, float]:
    """Polish a zero of band ``expansion.band``; returns (zero, last step size)."""
    z = complex(seed)
    step = math.inf
    for _ in range(max_iter):
        value, slope = band_value_and_slope(expansion, z)
        if slope == 0:
            raise NumericalError(f"Vanishing derivative at {z}")
        step = abs(order * value / slope)
        z = z - order * value / slope
        if step <= tol * max(1.0, abs(z)):
            break
    else:
        raise NumericalError(f"Newton did not converge from {seed} (last step {step:.3e})")

    if z.imag != 0.0 and abs(z.imag) <= REAL_SNAP_TOL * max(1.0, abs(z)):
        x = z.real
        for _ in range(max_iter):
            value, slope = band_value_and_slope(expansion, complex(x))
            dx = order * value.real / slope.real
            x -= dx
            if abs(dx) <= tol * max(1.0, abs(x)):
                break
        z, step = complex(x, 0.0), abs(dx)
    return z, step


@dataclass(frozen=True)
class _CellOutcome:
    winding: int
    zeros: Tuple[Tuple[complex, int, float], ...]
    boundary_hit: bool = False


def _isolate(expansion: CycleExpansion, lo: complex, hi: complex, winding: int, depth: int):
    center = 0.5 * (lo + hi)
    if winding == 1 or depth >= MAX_SUBDIVISION_DEPTH:
        size = abs(hi - lo)
        for seed in (center, 0.75 * lo + 0.25 * hi, 0.25 * lo + 0.75 * hi):
            try:
                z, step = newton_refine(expansion, seed, order=winding)
            except NumericalError:
                continue
            if lo.real - 1e-3 * size <= z.real <= hi.real + 1e-3 * size and \
                    lo.imag - 1e-3 * size <= z.imag <= hi.imag + 1e-3 * size:
                return [(z, winding, step)]
        if depth >= MAX_SUBDIVISION_DEPTH:
            logger.warning("Newton failed to confirm %d zero(s) of band %d near %s",
                           winding, expansion.band, center)
            return []

    for split in _SPLITS:
        mid = complex(lo.real + split * (hi.real - lo.real), lo.imag + split * (hi.imag - lo.imag))
        quads = [
            (lo, mid),
            (complex(mid.real, lo.imag), complex(hi.real, mid.imag)),
            (complex(lo.real, mid.imag), complex(mid.real, hi.imag)),
            (mid, hi),
        ]
        try:
            counts = [winding_number(expansion, a, b) for a, b in quads]
        except _BoundaryZero:
            continue
        found = []
        for (a, b), count in zip(quads, counts):
            if count > 0:
                found.extend(_isolate(expansion, a, b, count, depth + 1))
        return found
    logger.warning("Could not subdivide cell [%s, %s] of band %d", lo, hi, expansion.band)
    return []


def _scan_cell(expansion: CycleExpansion, corners: Tuple[complex, complex]) -> _CellOutcome:
    lo, hi = corners
    try:
        winding = winding_number(expansion, lo, hi)
    except _BoundaryZero as exc:
        logger.debug("Cell [%s, %s]: %s", lo, hi, exc)
        return _CellOutcome(0, (), boundary_hit=True)
    if winding < 0:
        logger.warning("Negative winding %d in cell [%s, %s]; truncated band has a pole?", winding, lo, hi)
        return _CellOutcome(winding, ())
    if winding == 0:
        return _CellOutcome(0, ())
    return _CellOutcome(winding, tuple(_isolate(expansion, lo, hi, winding, 0)))


def _cell_grid(rect: Rectangle, cell: float, shift: float) -> List[Tuple[complex, complex]]:
    offset = shift * cell
    n_re = int(math.ceil((rect.re1 - rect.re0 + offset) / cell)) + 1
    n_im = int(math.ceil((rect.im1 - rect.im0 + offset) / cell)) + 1
    cells = []
    for i in range(n_im):
        for j in range(n_re):
            lo = complex(rect.re0 - offset + j * cell, rect.im0 - offset + i * cell)
            cells.append((lo, lo + complex(cell, cell)))
    return cells


def _merge(zeros: Sequence[Tuple[complex, int, float]]) -> List[Tuple[complex, int, float]]:
    merged: List[Tuple[complex, int, float]] = []
    for z, order, step in sorted(zeros, key=lambda item: (item[0].imag, item[0].real)):
        if any(abs(z - other) <= MERGE_TOL for other, _, _ in merged):
            continue
        merged.append((z, order, step))
    return merged


def _scan_band(
    expansion: CycleExpansion, rect: Rectangle, cell: float, workers: int, progress: bool
) -> List[Tuple[complex, int, float]]:
    outcomes: List[_CellOutcome] = []
    for attempt, shift in enumerate(_GRID_SHIFTS):
        cells = _cell_grid(rect, cell, shift)
        outcomes = parallel_map(
            partial(_scan_cell, expansion), cells, workers,
            desc=f"band {expansion.band} cells", progress=progress,
        )
        hits = sum(o.boundary_hit for o in outcomes)
        if not hits:
            break
        logger.warning("Band %d: %d cell(s) have a zero on their boundary; re-dissecting (attempt %d)",
                       expansion.band, hits, attempt + 1)
    else:
        logger.warning("Band %d: %d cell(s) skipped after %d dissections",
                       expansion.band, hits, len(_GRID_SHIFTS))

    zeros = _merge([z for outcome in outcomes for z in outcome.zeros])
    counted = sum(max(o.winding, 0) for o in outcomes)
    confirmed = sum(order for _, order, _ in zeros)
    if counted != confirmed:
        logger.warning("Band %d: winding count %d but %d zero(s) confirmed by Newton",
                       expansion.band, counted, confirmed)
    return [item for item in zeros if rect.contains(item[0])]


def scan(
    expansions: Sequence[CycleExpansion],
    rect: Rectangle,
    cell: float = 0.25,
    *,
    include_conjugates: bool = True,
    workers: int = 1,
    progress: bool = False,
) -> List[Resonance]:
    """All zeros of the given bands inside ``rect``, sorted by (Im, Re, band)."""
    rect = Rectangle(*rect).checked()
    if not 0.0 < cell <= MAX_CELL_SIZE:
        raise ConfigError(f"Cell size must lie in (0, {MAX_CELL_SIZE}], got {cell}")

    found: List[Resonance] = []
    for expansion in expansions:
        zeros = _scan_band(expansion, rect, cell, workers, progress)
        band_found = [Resonance(z, expansion.band, order, step, expansion.n_max) for z, order, step in zeros]
        if include_conjugates:
            for res in list(band_found):
                if res.lam.imag != 0.0 and not any(
                    abs(other.lam - res.lam.conjugate()) <= MERGE_TOL for other in band_found
                ):
                    band_found.append(res.conjugate())
        logger.info("Band %d: %d zero(s) in %s", expansion.band, len(band_found), tuple(rect))
        found.extend(band_found)
    return sorted(found, key=lambda r: (r.lam.imag, r.lam.real, r.band))


def truncation_history(
    orbits: Sequence[OrbitLike], band: int, seed: complex, n_values: Sequence[int]
) -> List[complex]:
    """Follow one zero through increasing truncation lengths."""
    history: List[complex] = []
    z = complex(seed)
    for n in n_values:
        z, _ = newton_refine(build_expansion(orbits, band, n), z)
        history.append(z)
    return history


def leading_resonance(resonances: Sequence[Resonance]) -> Resonance:
    if not resonances:
        raise NumericalError("No resonances to choose from")
    return max(resonances, key=lambda r: (r.lam.real, -abs(r.lam.imag), -r.band))


def escape_rate(resonances: Sequence[Resonance]) -> float:
    """Minus the leading real zero of band 1."""
    real = [r for r in resonances if r.band == 1 and r.lam.imag == 0.0]
    if not real:
        raise NumericalError("No real band-1 zero found; widen the scan rectangle")
    return -max(r.lam.real for r in real)


def near_critical_line(resonances: Sequence[Resonance], width: float) -> List[Resonance]:
    """Resonances whose real part is within ``width`` of the leading one."""
    if width < 0:
        raise ValueError(f"width must be non-negative, got {width}")
    if not resonances:
        return []
    top = max(r.lam.real for r in resonances)
    close = [r for r in resonances if r.lam.real >= top - width]
    return sorted(close, key=lambda r: (r.lam.imag, r.lam.real, r.band))


__all__ = [
    "Rectangle",
    "Resonance",
    "escape_rate",
    "leading_resonance",
    "near_critical_line",
    "newton_refine",
    "scan",
    "truncation_history",
    "winding_number",
]
