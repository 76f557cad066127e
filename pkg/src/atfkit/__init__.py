"""Exact toolkit for almost toric base diagrams of monotone del Pezzo surfaces."""

__version__ = "0.1.0"
