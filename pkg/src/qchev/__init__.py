"""Exact engine for quantum-group intertwiner trace functions and the
vector-valued restriction map to the torus."""

__version__ = "0.1.0"
