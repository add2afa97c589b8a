"""Relative Ginzburg dg-categories of triangulated surfaces, assembled from
triangle-local pieces and checked with exact arithmetic."""

__version__ = "0.1.0"
