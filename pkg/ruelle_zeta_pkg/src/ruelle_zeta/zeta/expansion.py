"""Curvature-ordered cycle expansions of the weighted zeta bands.

Band ``k`` is the product over prime cycles of
``1 - exp(beta*A_p) * sigma_p**(k+1) * exp(-lam*T_p) / |Lambda_p|**k``.
Expanded to first order in ``beta`` and truncated at total topological length
``n_max``, it becomes a sum over pseudo-cycles (sets of distinct primes).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ..errors import MissingCycleError, PoleProximityError
from ..symbolic.cycles import enumerate_prime_cycles

logger = logging.getLogger(__name__)

POLE_PROXIMITY = 1e-8
MODES = ("value", "dlam", "dbeta")


class OrbitLike(Protocol):
    length: int
    period: float
    stability: float


@dataclass(frozen=True)
class CycleRecord:
    """Bare orbit data: topological length, period and signed stability."""

    length: int
    period: float
    stability: float
    word: str = ""


@dataclass(frozen=True, eq=False)
class CycleExpansion:
    """Pseudo-cycle table of one zeta band.

    ``membership[i, p]`` is 1 when prime ``p`` (an index into the orbit table)
    belongs to pseudo-cycle ``i``.
    """

    band: int
    n_max: int
    primes: Tuple[OrbitLike, ...]
    lengths: np.ndarray
    signs: np.ndarray
    periods: np.ndarray
    factors: np.ndarray
    membership: np.ndarray

    def __len__(self) -> int:
        return len(self.signs)

    def terms(self, lam) -> np.ndarray:
        """sign * w * exp(-lam * T) per pseudo-cycle; shape (..., n_pseudo)."""
        lam = np.asarray(lam, dtype=complex)
        return self.signs * self.factors * np.exp(-lam[..., None] * self.periods)

    def pseudo_weights(self, weights: np.ndarray) -> np.ndarray:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (len(self.primes),):
            raise ValueError(
                f"Expected {len(self.primes)} orbit weights, got shape {weights.shape}"
            )
        return self.membership @ weights


def _check_complete(orbits: Sequence[OrbitLike], n_max: int) -> None:
    cycles = [getattr(o, "cycle", None) for o in orbits]
    if not cycles or any(c is None for c in cycles):
        return
    domain = cycles[0].domain
    have = {c.symbols for c in cycles}
    missing = [c.symbols for c in enumerate_prime_cycles(domain, n_max) if c.symbols not in have]
    if missing:
        raise MissingCycleError(
            f"Orbit table lacks {len(missing)} prime cycles up to length {n_max}: {missing[:5]}"
        )


def build_expansion(orbits: Sequence[OrbitLike], k: int, n_max: int) -> CycleExpansion:
    """Enumerate all pseudo-cycles of total length <= n_max for band ``k``."""
    if k < 1:
        raise ValueError(f"Band index must be >= 1, got {k}")
    _check_complete(orbits, n_max)

    order = sorted(
        (i for i, o in enumerate(orbits) if o.length <= n_max),
        key=lambda i: (orbits[i].length, getattr(orbits[i], "word", ""), i),
    )
    t_p = np.array([orbits[i].period for i in order])
    lam_p = np.array([orbits[i].stability for i in order])
    base = np.sign(lam_p) ** (k + 1) * np.abs(lam_p) ** (-float(k))
    lengths_p = [orbits[i].length for i in order]

    rows: List[Tuple[int, ...]] = []

    def extend(start: int, chosen: List[int], total: int) -> None:
        for j in range(start, len(order)):
            if total + lengths_p[j] > n_max:
                # primes are sorted by length
                break
            chosen.append(j)
            rows.append(tuple(chosen))
            extend(j + 1, chosen, total + lengths_p[j])
            chosen.pop()

    extend(0, [], 0)
    rows.sort(key=lambda row: (sum(lengths_p[j] for j in row), row))

    membership = np.zeros((len(rows), len(orbits)))
    lengths = np.empty(len(rows), dtype=int)
    signs = np.empty(len(rows))
    periods = np.empty(len(rows))
    factors = np.empty(len(rows))
    for i, row in enumerate(rows):
        membership[i, [order[j] for j in row]] = 1.0
        lengths[i] = sum(lengths_p[j] for j in row)
        signs[i] = (-1.0) ** len(row)
        periods[i] = t_p[list(row)].sum()
        factors[i] = float(np.prod(base[list(row)]))

    logger.debug("Band %d: %d pseudo-cycles up to length %d", k, len(rows), n_max)
    return CycleExpansion(
        band=k,
        n_max=n_max,
        primes=tuple(orbits),
        lengths=lengths,
        signs=signs,
        periods=periods,
        factors=factors,
        membership=membership,
    )


def _fsum_complex(values: np.ndarray, start: complex = 0.0) -> complex:
    real = math.fsum([start.real, *values.real.tolist()])
    imag = math.fsum([start.imag, *values.imag.tolist()])
    return complex(real, imag)


def zeta_inv(
    expansion: CycleExpansion, lam, mode: str = "value", weights: Optional[np.ndarray] = None
):
    """1/zeta_k, its lambda-derivative or its beta-derivative at ``lam``.

    Scalar input is summed with compensated summation; array input returns an
    array of the same shape.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got '{mode}'")
    terms = expansion.terms(lam)
    if mode == "dlam":
        terms = -expansion.periods * terms
        start = 0.0
    elif mode == "dbeta":
        if weights is None:
            raise ValueError("mode 'dbeta' needs orbit weights")
        terms = expansion.pseudo_weights(weights) * terms
        start = 0.0
    else:
        start = 1.0

    if np.ndim(lam) == 0:
        return _fsum_complex(terms, complex(start))
    return start + terms.sum(axis=-1)


def band_value_and_slope(expansion: CycleExpansion, lam):
    """1/zeta_k and d/dlam from one evaluation of the exponentials."""
    terms = expansion.terms(lam)
    if np.ndim(lam) == 0:
        return _fsum_complex(terms, 1.0 + 0j), _fsum_complex(-expansion.periods * terms)
    return 1.0 + terms.sum(axis=-1), (-expansion.periods * terms).sum(axis=-1)


def weighted_zeta(
    expansions: Sequence[CycleExpansion], lam: complex, weights: np.ndarray
) -> complex:
    """Z_f(lam) = sum_k k * (-d_beta zeta_k^-1 / zeta_k^-1)."""
    total = 0.0 + 0.0j
    for expansion in expansions:
        value, slope = band_value_and_slope(expansion, complex(lam))
        if abs(value) <= POLE_PROXIMITY * abs(slope):
            raise PoleProximityError(
                f"lambda = {lam} lies on a zero of band {expansion.band}", band=expansion.band
            )
        dbeta = zeta_inv(expansion, complex(lam), "dbeta", weights)
        total += expansion.band * (-dbeta / value)
    return total


def weighted_zeta_many(
    expansions: Sequence[CycleExpansion], lams: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    """Vectorized weighted_zeta over an array of points (no proximity check)."""
    lams = np.asarray(lams, dtype=complex)
    total = np.zeros(lams.shape, dtype=complex)
    for expansion in expansions:
        value = zeta_inv(expansion, lams, "value")
        dbeta = zeta_inv(expansion, lams, "dbeta", weights)
        total += expansion.band * (-dbeta / value)
    return total


def band_truncation_bound(
    orbits: Sequence[OrbitLike], lam: complex, weights: np.ndarray, k_max: int
) -> float:
    """Bound on everything the bands k > k_max add to the weighted zeta function.

    With y = 1/|Lambda| and x = exp(-Re lam T) a prime contributes
    sum_r x^r sum_{k>K} k y^(rk). The first repetition is summed exactly,
    sum_{k>K} k y^k = y^(K+1) ((K+1) - K y) / (1 - y)^2, and the repetitions
    r >= 2 are bounded by (K+1) / (1 - y)^2 z^2 / (1 - z) with z = x y^(K+1).
    Returns inf when some prime has z >= 1.
    """
    bound = 0.0
    for orbit, a_p in zip(orbits, np.asarray(weights, dtype=float)):
        x = math.exp(-complex(lam).real * orbit.period)
        y = 1.0 / abs(orbit.stability)
        z = x * y ** (k_max + 1)
        if z >= 1.0:
            return math.inf
        first = x * y ** (k_max + 1) * ((k_max + 1) - k_max * y) / (1.0 - y) ** 2
        repeats = (k_max + 1) / (1.0 - y) ** 2 * z * z / (1.0 - z)
        bound += abs(a_p) * (first + repeats)
    return bound


__all__ = [
    "CycleExpansion",
    "CycleRecord",
    "OrbitLike",
    "band_truncation_bound",
    "band_value_and_slope",
    "build_expansion",
    "weighted_zeta",
    "weighted_zeta_many",
    "zeta_inv",
]
