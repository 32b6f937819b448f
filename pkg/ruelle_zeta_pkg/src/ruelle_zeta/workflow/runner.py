"""Pipeline runner: orbits -> expansions -> resonances -> distributions."""
from __future__ import annotations

import dataclasses
from functools import partial
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import RunConfig, dump_yaml
from ..errors import ConfigError, NonSimpleResonanceError, NumericalError
from ..geometry.discs import DiscSystem
from ..logging import setup_logger
from ..orbits.solver import OrbitResult, PeriodicOrbit, try_find_orbit
from ..orbits.weights import ConstantOne, orbit_weights
from ..parallel import parallel_map
from ..provenance import write_sidecar
from ..resonances.residues import default_contour_radius, laurent_coefficient, residue
from ..resonances.scan import (
    Rectangle,
    Resonance,
    leading_resonance,
    near_critical_line,
    newton_refine,
    scan,
    truncation_history,
)
from ..ruelle.grid import GridSpec, distribution_grid, localization_metric
from ..ruelle.output import (
    FLOAT_FORMAT,
    failure_messages,
    write_grid_csv,
    write_orbit_table,
    write_pgm,
    write_resonance_table,
    write_zeta_table,
)
from ..symbolic.cycles import enumerate_prime_cycles
from ..zeta.expansion import CycleExpansion, band_truncation_bound, build_expansion, weighted_zeta
from .validator import validate_orbit_table


class PipelineRunner:
    def __init__(self, config: RunConfig, logger=None, command: str = "run") -> None:
        self.config = config
        self.logger = logger or setup_logger()
        self.command = command

        self.output_dir = Path(config.output.out_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

        sys_cfg = config.system
        self.system = DiscSystem(sys_cfg.d_over_r, sys_cfg.r, sys_cfg.reference_disc)

        self._results: Optional[List[OrbitResult]] = None
        self._expansions: Optional[List[CycleExpansion]] = None
        self._resonances: Optional[List[Resonance]] = None

    # ------------------------------------------------------------------
    # Utility helpers
    # ------------------------------------------------------------------
    def _persist_config(self) -> None:
        dump_yaml(self.config.to_dict(), self.output_dir / "config.yaml")

    def _record(self, path: Path, **extra) -> Path:
        write_sidecar(
            path,
            config=self.config.to_dict(),
            command=self.command,
            n_max=self.config.expansion.n_max,
            extra=extra or None,
        )
        self.logger.info(f"📄 Wrote {path}")
        return path

    def _banner(self, title: str) -> None:
        self.logger.info("=" * 60)
        self.logger.info(title)
        self.logger.info("=" * 60)

    @property
    def orbits(self) -> List[PeriodicOrbit]:
        return [r.orbit for r in self._step_orbits() if r.orbit is not None]

    @property
    def unit_weights(self) -> np.ndarray:
        return orbit_weights(self.system, self.orbits, ConstantOne())

    # ------------------------------------------------------------------
    # Steps
    # ------------------------------------------------------------------
    def _step_orbits(self) -> List[OrbitResult]:
        if self._results is None:
            exp_cfg = self.config.expansion
            cycles = enumerate_prime_cycles(exp_cfg.domain, exp_cfg.n_max)
            self.logger.info(
                f"Solving {len(cycles)} {exp_cfg.domain}-domain prime cycles up to length "
                f"{exp_cfg.n_max} at d/r = {self.system.d_over_r:g}"
            )
            self._results = parallel_map(
                partial(try_find_orbit, self.system),
                cycles,
                self.config.compute.workers,
                desc="orbits",
                progress=self.config.compute.progress,
            )
            validate_orbit_table(self._results, logger=self.logger)
        return self._results

    def _step_expansions(self) -> List[CycleExpansion]:
        if self._expansions is None:
            orbits = self.orbits
            exp_cfg = self.config.expansion
            self._expansions = [
                build_expansion(orbits, k, exp_cfg.n_max) for k in range(1, exp_cfg.k_max + 1)
            ]
            sizes = ", ".join(str(len(e)) for e in self._expansions)
            self.logger.info(f"Built {len(self._expansions)} zeta band(s); pseudo-cycles per band: {sizes}")
        return self._expansions

    def _step_resonances(self) -> List[Resonance]:
        if self._resonances is None:
            expansions = self._step_expansions()
            scan_cfg = self.config.scan
            found = scan(
                expansions,
                Rectangle(*scan_cfg.rectangle),
                scan_cfg.cell,
                workers=self.config.compute.workers,
                progress=self.config.compute.progress,
            )
            self._resonances = [self._with_error_bar(r) for r in found]
        return self._resonances

    def _with_error_bar(self, resonance: Resonance) -> Resonance:
        n_max = self.config.expansion.n_max
        if n_max < 2 or resonance.order != 1:
            return resonance
        try:
            previous, current = truncation_history(
                self.orbits, resonance.band, resonance.lam, [n_max - 1, n_max]
            )
        except NumericalError as exc:
            self.logger.warning(f"No error bar for {resonance.lam}: {exc}")
            return resonance
        return dataclasses.replace(resonance, error_bar=abs(current - previous))

    def _residue_z1(self, resonance: Resonance, expansions: Sequence[CycleExpansion]) -> complex:
        weights = self.unit_weights
        try:
            return residue(expansions, resonance, weights, key="Z1")
        except NonSimpleResonanceError:
            others = [r.lam for r in self._step_resonances() if abs(r.lam - resonance.lam) > 1e-6]
            close = sum(r.order for r in self._step_resonances() if abs(r.lam - resonance.lam) <= 1e-6)
            return laurent_coefficient(
                expansions, resonance.lam, 0, weights,
                radius=default_contour_radius(resonance.lam, others),
                multiplicity=max(close, resonance.order),
            )

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------
    def run_orbits(self) -> Path:
        self._persist_config()
        self._banner("Periodic orbits")
        results = self._step_orbits()
        path = write_orbit_table(results, self.output_dir / "orbits.csv")
        failures = failure_messages(results)
        if failures:
            self.logger.warning(f"{len(failures)} cycle(s) left empty in {path.name}; reasons in its sidecar")
        return self._record(path, domain=self.config.expansion.domain, failures=failures)

    def run_zeta(self, lambdas: Optional[Sequence[complex]] = None) -> Path:
        self._persist_config()
        self._banner("Weighted zeta function")
        if lambdas is None:
            lambdas = [complex(re, im) for re, im in self.config.zeta.lambdas]
        expansions = self._step_expansions()
        weights = self.unit_weights
        values, tails = [], []
        for lam in lambdas:
            values.append(weighted_zeta(expansions, lam, weights))
            tails.append(band_truncation_bound(self.orbits, lam, weights, self.config.expansion.k_max))
        path = write_zeta_table(lambdas, values, tails, self.output_dir / "zeta.csv")
        return self._record(path, k_max=self.config.expansion.k_max)

    def run_resonances(self) -> Tuple[Path, List[Resonance]]:
        self._persist_config()
        self._banner("Resonance scan")
        expansions = self._step_expansions()
        resonances = self._step_resonances()
        residues = []
        for res in resonances:
            try:
                residues.append(self._residue_z1(res, expansions))
            except NumericalError as exc:
                self.logger.warning(f"Residue at {res.lam} unavailable: {exc}")
                residues.append(complex(np.nan, np.nan))
        path = write_resonance_table(resonances, residues, self.output_dir / "resonances.csv")
        self.logger.info(f"Found {len(resonances)} resonance(s) in {self.config.scan.rectangle}")
        return self._record(path, rectangle=list(self.config.scan.rectangle)), resonances

    def select_resonances(self, selector: Optional[str] = None) -> List[Resonance]:
        """Resolve ``leading``, an index, ``RE,IM`` or ``critical:WIDTH``."""
        selector = (selector or self.config.distribution.resonance).strip()
        if "," in selector:
            try:
                seed = complex(*(float(v) for v in selector.split(",")))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"Cannot parse resonance '{selector}' as RE,IM") from exc
            return [self._refine_seed(seed)]

        resonances = self._step_resonances()
        if selector == "leading":
            return [leading_resonance(resonances)]
        if selector.startswith("critical:"):
            try:
                width = float(selector.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigError(f"Cannot parse width in '{selector}'") from exc
            return near_critical_line(resonances, width)
        try:
            index = int(selector)
        except ValueError as exc:
            raise ConfigError(f"Unknown resonance selector '{selector}'") from exc
        if not 0 <= index < len(resonances):
            raise ConfigError(f"Resonance index {index} out of range (found {len(resonances)})")
        return [resonances[index]]

    def _refine_seed(self, seed: complex) -> Resonance:
        best: Optional[Resonance] = None
        for expansion in self._step_expansions():
            try:
                z, step = newton_refine(expansion, seed)
            except NumericalError:
                continue
            candidate = Resonance(z, expansion.band, 1, step, expansion.n_max)
            if best is None or abs(z - seed) < abs(best.lam - seed):
                best = candidate
        if best is None:
            raise NumericalError(f"No zeta band has a zero near {seed}")
        return best

    def run_distribution(self, selector: Optional[str] = None) -> List[Path]:
        self._persist_config()
        self._banner("Invariant Ruelle distributions")
        dist_cfg = self.config.distribution
        grid = GridSpec(*dist_cfg.grid)
        expansions = self._step_expansions()
        out_dir = self.output_dir / "distribution"
        out_dir.mkdir(parents=True, exist_ok=True)

        written: List[Path] = []
        rows = []
        for index, res in enumerate(self.select_resonances(selector)):
            for sigma in dist_cfg.sigmas:
                dist = distribution_grid(self.system, self.orbits, expansions, res, grid, sigma,
                                         allow_contour=True)
                abs_re_min, abs_re_max = dist.abs_re_range
                stem = f"res{index:03d}_k{res.band}_sigma{sigma:g}"
                meta = dict(lam_re=res.lam.real, lam_im=res.lam.imag, band=res.band, sigma=sigma,
                            re_min=dist.re_min, re_max=dist.re_max,
                            abs_re_min=abs_re_min, abs_re_max=abs_re_max)
                written.append(self._record(write_grid_csv(dist, out_dir / f"{stem}.csv"), **meta))
                written.append(self._record(write_pgm(dist, out_dir / f"{stem}.pgm"), **meta))
                try:
                    fraction = localization_metric(dist, dist_cfg.delta_cells)
                except ValueError as exc:
                    self.logger.warning(f"Localization undefined for {stem}: {exc}")
                    fraction = float("nan")
                self.logger.info(f"{stem}: localization(delta={dist_cfg.delta_cells}) = {fraction:.6f}")
                rows.append({"re": res.lam.real, "im": res.lam.imag, "band": res.band,
                             "sigma": sigma, "delta_cells": dist_cfg.delta_cells,
                             "localization": fraction})

        summary = out_dir / "localization.csv"
        pd.DataFrame(rows, columns=["re", "im", "band", "sigma", "delta_cells", "localization"]).to_csv(
            summary, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
        )
        written.append(self._record(summary))
        return written
