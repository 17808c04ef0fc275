"""Exact Kulshammer-type ideals and homological invariants over GF(p)."""

__version__ = "0.1.0"
