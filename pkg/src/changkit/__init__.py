"""Exact Fourier analysis of subsets of the Boolean cube and checkers for
Chang-type level-1 inequalities."""

__version__ = "0.1.0"
