"""Jaccard index statistics on Erdős–Rényi random graphs."""

__version__ = "0.1.0"
