"""Bit-reproducible CSV and PGM writers for result tables and grids."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, Iterable, Sequence

import numpy as np
import pandas as pd

from ..orbits.solver import OrbitResult
from ..resonances.scan import Resonance
from .grid import DistributionGrid

FLOAT_FORMAT = "%.17g"

ORBIT_COLUMNS = ["word", "domain", "m", "T", "Lambda", "sign", "residual"]
RESONANCE_COLUMNS = ["re", "im", "band", "order", "residual", "res_Z1_re", "res_Z1_im"]
ZETA_COLUMNS = ["re", "im", "Z_re", "Z_im", "tail_bound"]
GRID_COLUMNS = ["q", "p", "value_re", "value_im", "in_sigma1"]


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")
    return path


def orbit_frame(results: Iterable[OrbitResult]) -> pd.DataFrame:
    """One row per cycle; failed cycles keep their word with empty numeric fields.

    The header is fixed, so failure reasons go to ``failure_messages`` instead.
    """
    rows = []
    for result in results:
        orbit = result.orbit
        rows.append({
            "word": result.cycle.symbols,
            "domain": result.cycle.domain,
            "m": orbit.m if orbit else None,
            "T": orbit.period if orbit else math.nan,
            "Lambda": orbit.stability if orbit else math.nan,
            "sign": orbit.sign if orbit else None,
            "residual": orbit.residual if orbit else math.nan,
        })
    frame = pd.DataFrame(rows, columns=ORBIT_COLUMNS)
    return frame.astype({"m": "Int64", "sign": "Int64"})


def failure_messages(results: Iterable[OrbitResult]) -> Dict[str, str]:
    """Word -> error text for every cycle that did not solve."""
    return {r.cycle.symbols: r.error or "unknown failure" for r in results if r.orbit is None}


def write_orbit_table(results: Iterable[OrbitResult], path: Path) -> Path:
    return _write_csv(orbit_frame(results), path)


def write_resonance_table(resonances: Sequence[Resonance], residues_z1: Sequence[complex], path: Path) -> Path:
    frame = pd.DataFrame(
        [
            {
                "re": r.lam.real,
                "im": r.lam.imag,
                "band": r.band,
                "order": r.order,
                "residual": r.residual,
                "res_Z1_re": z.real,
                "res_Z1_im": z.imag,
            }
            for r, z in zip(resonances, residues_z1)
        ],
        columns=RESONANCE_COLUMNS,
    )
    return _write_csv(frame, path)


def write_zeta_table(lams: Sequence[complex], values: Sequence[complex], tails: Sequence[float], path: Path) -> Path:
    frame = pd.DataFrame(
        {
            "re": [complex(z).real for z in lams],
            "im": [complex(z).imag for z in lams],
            "Z_re": [complex(v).real for v in values],
            "Z_im": [complex(v).imag for v in values],
            "tail_bound": list(tails),
        },
        columns=ZETA_COLUMNS,
    )
    return _write_csv(frame, path)


def grid_frame(grid: DistributionGrid) -> pd.DataFrame:
    """One row per node, p ascending in the outer loop and q in the inner."""
    q, p = np.meshgrid(grid.q, grid.p)
    mask = grid.mask if grid.mask is not None else np.zeros(grid.values.shape, dtype=bool)
    return pd.DataFrame(
        {
            "q": q.ravel(),
            "p": p.ravel(),
            "value_re": grid.values.real.ravel(),
            "value_im": grid.values.imag.ravel(),
            "in_sigma1": mask.ravel().astype(int),
        },
        columns=GRID_COLUMNS,
    )


def write_grid_csv(grid: DistributionGrid, path: Path) -> Path:
    return _write_csv(grid_frame(grid), path)


def pgm_pixels(values: np.ndarray) -> np.ndarray:
    """8-bit gray levels, linear in the real part between its extremes."""
    real = np.asarray(values).real
    v_min, v_max = float(real.min()), float(real.max())
    if v_max == v_min:
        return np.full(real.shape, 128, dtype=np.uint8)
    return np.floor(255.0 * (real - v_min) / (v_max - v_min) + 0.5).astype(np.uint8)


def write_pgm(grid: DistributionGrid, path: Path) -> Path:
    """Binary P5 image: rows from p = +1 down to p = -1, columns from q = -pi."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pixels = pgm_pixels(grid.values)[::-1]
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii")
    with path.open("wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(pixels).tobytes())
    return path


__all__ = [
    "FLOAT_FORMAT",
    "GRID_COLUMNS",
    "ORBIT_COLUMNS",
    "RESONANCE_COLUMNS",
    "ZETA_COLUMNS",
    "failure_messages",
    "grid_frame",
    "orbit_frame",
    "pgm_pixels",
    "write_grid_csv",
    "write_orbit_table",
    "write_pgm",
    "write_resonance_table",
    "write_zeta_table",
]
