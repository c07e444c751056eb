"""Enumeration kernel selection: compiled Cython core when available,
pure-Python fallback otherwise. `BACKEND` reports which one is active."""

from . import _gray_py

try:
    from . import _gray_cy

    BACKEND = "cython"
    enumerate_vertices = _gray_cy.enumerate_vertices
except ImportError:  # extension not built
    BACKEND = "python"
    enumerate_vertices = _gray_py.enumerate_vertices

enumerate_vertices_py = _gray_py.enumerate_vertices
