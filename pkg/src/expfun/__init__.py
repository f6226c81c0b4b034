"""Exact computations with graded bicommutative Hopf algebras over F_p."""

__version__ = "0.1.0"
