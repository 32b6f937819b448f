"""Pipeline orchestration for ruelle_zeta."""
from .runner import PipelineRunner
from .validator import validate_orbit_table

__all__ = ["PipelineRunner", "validate_orbit_table"]
