"""grash - successive halving for knowledge graph embeddings."""

__version__ = "0.1.0"
