"""Configuration utilities for ruelle_zeta runs."""
from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml

from .constants import DATA_DIR, DOMAINS, MAX_CELL_SIZE, MAX_WORD_LENGTH, SMOKE_DIR
from .errors import ConfigError

MAX_BANDS = 4
MAX_GRID = (2000, 1000)


@dataclass(frozen=True)
class SystemConfig:
    d_over_r: float = 6.0
    r: float = 1.0
    reference_disc: int = 0


@dataclass(frozen=True)
class ExpansionConfig:
    n_max: int = 8
    k_max: int = 2
    domain: str = "fundamental"


@dataclass(frozen=True)
class ScanConfig:
    rectangle: Tuple[float, float, float, float] = (-1.0, 0.5, 0.0, 20.0)
    cell: float = 0.25


@dataclass(frozen=True)
class DistributionConfig:
    sigmas: Tuple[float, ...] = (0.1, 0.001)
    grid: Tuple[int, int] = (400, 200)
    delta_cells: int = 2
    resonance: str = "leading"


@dataclass(frozen=True)
class ZetaConfig:
    lambdas: Tuple[Tuple[float, float], ...] = ((2.0, 0.0),)
    r_max: int = 20


@dataclass(frozen=True)
class ComputeConfig:
    workers: int = 1
    progress: bool = True


@dataclass(frozen=True)
class OutputConfig:
    out_dir: str = "runs/latest"


def _tuple(value, depth: int = 1):
    if depth > 1:
        return tuple(_tuple(v, depth - 1) for v in value)
    return tuple(value)


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one run, grouped as in the YAML file."""

    project_name: str = "ruelle_zeta"
    system: SystemConfig = field(default_factory=SystemConfig)
    expansion: ExpansionConfig = field(default_factory=ExpansionConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    distribution: DistributionConfig = field(default_factory=DistributionConfig)
    zeta: ZetaConfig = field(default_factory=ZetaConfig)
    compute: ComputeConfig = field(default_factory=ComputeConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        data = data or {}
        known = {"project_name", "system", "expansion", "scan", "distribution", "zeta", "compute", "output"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown configuration section(s): {', '.join(sorted(unknown))}")
        try:
            scan = dict(data.get("scan") or {})
            if "rectangle" in scan:
                scan["rectangle"] = _tuple(scan["rectangle"])
            dist = dict(data.get("distribution") or {})
            if "sigmas" in dist:
                dist["sigmas"] = _tuple(dist["sigmas"])
            if "grid" in dist:
                dist["grid"] = _tuple(dist["grid"])
            zeta = dict(data.get("zeta") or {})
            if "lambdas" in zeta:
                zeta["lambdas"] = _tuple(zeta["lambdas"], depth=2)
            return cls(
                project_name=data.get("project_name", "ruelle_zeta"),
                system=SystemConfig(**(data.get("system") or {})),
                expansion=ExpansionConfig(**(data.get("expansion") or {})),
                scan=ScanConfig(**scan),
                distribution=DistributionConfig(**dist),
                zeta=ZetaConfig(**zeta),
                compute=ComputeConfig(**(data.get("compute") or {})),
                output=OutputConfig(**(data.get("output") or {})),
            )
        except TypeError as exc:
            raise ConfigError(f"Invalid configuration key: {exc}") from exc

    def to_dict(self) -> Dict[str, Any]:
        def plain(value):
            if isinstance(value, (list, tuple)):
                return [plain(v) for v in value]
            if isinstance(value, dict):
                return {k: plain(v) for k, v in value.items()}
            return value

        return plain(asdict(self))

    def validate(self) -> "RunConfig":
        s, e, sc, d, z, c = self.system, self.expansion, self.scan, self.distribution, self.zeta, self.compute
        if not (isinstance(s.d_over_r, (int, float)) and s.d_over_r > 2.0):
            raise ConfigError(f"system.d_over_r must exceed 2, got {s.d_over_r}")
        if not s.r > 0:
            raise ConfigError(f"system.r must be positive, got {s.r}")
        if s.reference_disc not in (0, 1, 2):
            raise ConfigError(f"system.reference_disc must be 0, 1 or 2, got {s.reference_disc}")
        if not 1 <= e.n_max <= MAX_WORD_LENGTH:
            raise ConfigError(f"expansion.n_max must lie in [1, {MAX_WORD_LENGTH}], got {e.n_max}")
        if not 1 <= e.k_max <= MAX_BANDS:
            raise ConfigError(f"expansion.k_max must lie in [1, {MAX_BANDS}], got {e.k_max}")
        if e.domain not in DOMAINS:
            raise ConfigError(f"expansion.domain must be one of {DOMAINS}, got '{e.domain}'")
        if len(sc.rectangle) != 4 or not all(math.isfinite(v) for v in sc.rectangle):
            raise ConfigError(f"scan.rectangle must be four finite numbers, got {sc.rectangle}")
        re0, re1, im0, im1 = sc.rectangle
        if not (re0 < re1 and im0 < im1):
            raise ConfigError(f"scan.rectangle {sc.rectangle} is empty or inverted")
        if not 0 < sc.cell <= MAX_CELL_SIZE:
            raise ConfigError(f"scan.cell must lie in (0, {MAX_CELL_SIZE}], got {sc.cell}")
        if not d.sigmas or any(not 0 < sig <= 10.0 for sig in d.sigmas):
            raise ConfigError(f"distribution.sigmas must lie in (0, 10], got {d.sigmas}")
        if len(d.grid) != 2 or not (2 <= d.grid[0] <= MAX_GRID[0] and 2 <= d.grid[1] <= MAX_GRID[1]):
            raise ConfigError(f"distribution.grid must be within {MAX_GRID}, got {d.grid}")
        if d.delta_cells < 0:
            raise ConfigError(f"distribution.delta_cells must be non-negative, got {d.delta_cells}")
        if z.r_max < 1:
            raise ConfigError(f"zeta.r_max must be >= 1, got {z.r_max}")
        if any(len(pair) != 2 for pair in z.lambdas):
            raise ConfigError("zeta.lambdas must be [re, im] pairs")
        if c.workers < 1:
            raise ConfigError(f"compute.workers must be >= 1, got {c.workers}")
        return self


def load_yaml(path: Path) -> Dict[str, Any]:
    with path.open("r", encoding="utf-8") as fh:
        try:
            return yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"Cannot parse {path}: {exc}") from exc


def dump_yaml(data: Dict[str, Any], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        yaml.safe_dump(data, fh, sort_keys=False)


def default_config_path() -> Path:
    return DATA_DIR / "defaults" / "config.yaml"


def smoke_config_path() -> Path:
    return SMOKE_DIR / "config.yaml"


def merge_configs(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    result = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(result.get(key), dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result


def load_config(
    config_path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None
) -> RunConfig:
    """Package defaults, then the config file, then ``overrides`` (CLI flags win)."""
    config = load_yaml(default_config_path())
    if config_path is not None:
        config_path = Path(config_path)
        if not config_path.exists():
            raise ConfigError(f"Configuration file not found: {config_path}")
        config = merge_configs(config, load_yaml(config_path))
    config = merge_configs(config, overrides or {})
    return RunConfig.from_dict(config).validate()


def config_to_json(config: RunConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True)
