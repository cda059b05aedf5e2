"""Dialectica translation and finite doctrine checkers."""

__version__ = "0.1.0"
