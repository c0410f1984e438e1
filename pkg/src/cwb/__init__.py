"""Computability workbench: Type-2, Markov and K-name models on a concrete numbering."""

__version__ = "0.1.0"
