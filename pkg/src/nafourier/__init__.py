"""Exact character theory and nonabelian Fourier matrices for small finite groups."""

from __future__ import annotations

__version__ = "0.1.0"
