"""Witness-based detection of non-CCOP channels and non-bi-entangling gates."""

__version__ = "0.1.0"
