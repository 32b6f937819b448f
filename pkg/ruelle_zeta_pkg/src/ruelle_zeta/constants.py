"""Shared constants for the ruelle_zeta package."""
from pathlib import Path

PACKAGE_ROOT = Path(__file__).resolve().parent
DATA_DIR = PACKAGE_ROOT / "data"
SMOKE_DIR = DATA_DIR / "smoke"

# Geometry tolerances (lengths in units of r)
GRAZING_TOL = 1e-12
BOUNDARY_TOL = 1e-10
TRIANGLE_TOL = 1e-12
HIT_EPS = 1e-12

# Symbolic dynamics is only complete for well separated discs
GRAMMAR_WARN_D_OVER_R = 2.5
MAX_WORD_LENGTH = 24

# Orbit solver
NEWTON_MAX_ITER = 100
GRADIENT_TOL = 1e-12
HYPERBOLICITY_TOL = 1e-6

# Resonance scan
NEWTON_ZERO_TOL = 1e-12
MERGE_TOL = 1e-8
MAX_CELL_SIZE = 0.5
DEFAULT_CONTOUR_NODES = 64
MAX_CONTOUR_NODES = 4096

DOMAINS = ("fundamental", "full")
