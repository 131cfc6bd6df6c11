"""Desk-scale numerics for the ternary Goldbach problem with one restricted prime."""

__version__ = "0.1.0"
