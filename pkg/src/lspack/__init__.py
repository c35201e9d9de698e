"""Lattice-surgery patch placement: circuits, layouts, solvers, reductions."""

__version__ = "0.1.0"
