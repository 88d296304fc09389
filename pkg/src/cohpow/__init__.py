"""Cohesive powers of computable structures: classification and desk-scale verification."""
__version__ = "0.1.0"
