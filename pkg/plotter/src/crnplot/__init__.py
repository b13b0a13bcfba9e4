"""Rendering of experiment CSV outputs as figure images."""

from . import plots

__version__ = "0.1.0"
