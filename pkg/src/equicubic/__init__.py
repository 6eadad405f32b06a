"""Exact verification toolkit for finite group actions on cubic threefolds."""

__version__ = "0.1.0"
