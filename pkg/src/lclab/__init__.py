"""Graded local cohomology and Frobenius actions by exact degree-wise linear algebra."""

__version__ = "0.1.0"
