"""Desk-scale toolkit for markers, egg markers and automorphisms of subshifts on groups."""

__version__ = "0.1.0"
