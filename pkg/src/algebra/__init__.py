"""Algèbre linéaire exacte sur Q et complexes de cochaînes gradués."""

from .cochain import CochainComplex, GradedVS, Splitting, cohomology_basis, cohomology_dims
from .exactla import Matrix, kernel_basis, rank, solve

__all__ = [
    "CochainComplex",
    "GradedVS",
    "Splitting",
    "cohomology_basis",
    "cohomology_dims",
    "Matrix",
    "kernel_basis",
    "rank",
    "solve",
]
