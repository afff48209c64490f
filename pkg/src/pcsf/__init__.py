"""Exact rational tooling for the prize-collecting Steiner forest cut LP:
instance generators, a cutting-plane LP solver with vertex certificates,
exact IP baselines, rounding algorithms, and dominating forest
decompositions."""

__version__ = "0.1.0"
