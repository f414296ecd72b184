"""Borsuk-Ulam decisions for free involutions on surfaces mapping to surfaces."""

__version__ = "0.1.0"
