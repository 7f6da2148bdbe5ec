"""Trace calculus, explicit representations and sign analysis for SL2 character varieties."""

from __future__ import annotations

__version__ = "0.1.0"
