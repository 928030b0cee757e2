"""Polynomial identity testing for depth-3 circuits via width-2 products and algebras."""

from __future__ import annotations

__version__ = "0.1.0"
