"""Improvement dynamics, forbidden patterns and weak acyclicity for finite games."""

__version__ = "0.1.0"
