"""Exact smoothness tests for quotients of complex tori by finite groups."""

__version__ = "0.1.0"
