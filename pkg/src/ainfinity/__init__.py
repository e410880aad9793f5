"""Structures A∞ : transfert homotopique, produits de Massey, bar et cobar."""

from .ainfty import AInfinityStructure, check_stasheff, from_dg
from .barcobar import bar, cobar, universal_dg
from .transfer import MinimalModel, massey3, minimal_model

__all__ = [
    "AInfinityStructure",
    "check_stasheff",
    "from_dg",
    "bar",
    "cobar",
    "universal_dg",
    "MinimalModel",
    "massey3",
    "minimal_model",
]
