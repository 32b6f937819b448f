"""Symbolic dynamics of the 3-disc system."""
from .cycles import *  # noqa: F401,F403
from .cycles import __all__  # noqa: F401
