"""Certified numerics for the Lagarias divisor-sum inequality."""

__version__ = "0.1.0"
