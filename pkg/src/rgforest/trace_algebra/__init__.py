"""Bounded trace model of the command language and its law catalogue."""

from .model import *  # noqa: F401,F403
