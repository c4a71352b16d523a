"""Exact toolkit for graded algebras, graded pseudoautomorphisms and polynomial identities."""

__version__ = "0.1.0"
