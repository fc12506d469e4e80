"""Numerical toolkit for SU(2) averaging operators, Sp(2,R) decompositions
and the universal-cover quasi-morphism."""

__version__ = "0.1.0"
