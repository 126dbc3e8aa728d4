"""Exhaustive search for P_k-free counterexamples to the Erdős–Gyárfás conjecture."""

from .detect import ForbiddenCycleSpec
from .graph import Graph, new_path

__all__ = ["ForbiddenCycleSpec", "Graph", "new_path"]
