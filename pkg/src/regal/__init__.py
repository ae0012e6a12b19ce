"""Exact workbench for N-homogeneous algebras, their matrix bialgebras and
homological quasi-determinants."""

__version__ = "0.1.0"
