"""Weighted first-order logic and nested two-way weighted automata."""

__version__ = "0.1.0"
