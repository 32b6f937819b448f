"""Config hashing and ``.meta.json`` sidecars for every written result file."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional


def canonical_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(config: Dict[str, Any]) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def sha256sum(path: Path) -> str:
    hasher = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1024 * 1024), b""):
            hasher.update(chunk)
    return hasher.hexdigest()


def sidecar_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def write_sidecar(
    path: Path,
    *,
    config: Dict[str, Any],
    command: str,
    n_max: int,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """Record how ``path`` was produced next to it."""
    from . import __version__

    meta = {
        "version": __version__,
        "config_hash": config_hash(config),
        "n_max": n_max,
        "command": command,
        "file_sha256": sha256sum(path),
    }
    if extra:
        meta.update(extra)
    target = sidecar_path(path)
    target.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target


def verify_output(path: Path) -> bool:
    """True when ``path`` still matches the hash in its sidecar."""
    meta = json.loads(sidecar_path(path).read_text(encoding="utf-8"))
    return sha256sum(path) == meta["file_sha256"]


__all__ = [
    "canonical_json",
    "config_hash",
    "sha256sum",
    "sidecar_path",
    "verify_output",
    "write_sidecar",
]
