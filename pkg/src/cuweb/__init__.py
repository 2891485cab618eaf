"""Webbing of group systems over finite ordered monoids, with exhaustive checkers."""

__version__ = "0.1.0"
