"""Exact computations around nilpotent commuting varieties of reductive Lie algebras."""

__version__ = "0.1.0"
