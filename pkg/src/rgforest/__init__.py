"""Rely-guarantee development of a concurrent union-find forest, with checkers."""

__version__ = "0.1.0"
