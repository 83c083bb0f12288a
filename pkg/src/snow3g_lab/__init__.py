"""SNOW 3G keystream generator with pluggable multiplication and LFSR layouts."""

from .cipher import KeyMaterial, Snow3G, initialize
from .gf import AlphaTables, BackendKind, MulBackend, build_tables
from .lfsr import Layout, make_lfsr

__all__ = [
    "AlphaTables",
    "BackendKind",
    "KeyMaterial",
    "Layout",
    "MulBackend",
    "Snow3G",
    "build_tables",
    "initialize",
    "make_lfsr",
]

__version__ = "0.1.0"
