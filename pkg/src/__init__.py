"""
Moteur de calcul exact pour catégories DG (dgcalc).

Ce package contient :
- algebra : algèbre linéaire rationnelle, complexes de cochaînes
- categories : catégories DG, carquois DG, complexes tordus, mutations
- ainfinity : structures A∞, transfert, bar et cobar
- geometry : réseaux de Picard, extensions universelles
- storage : fichiers .dgq et .ainf
- cli : interface en ligne de commande
"""

from .errors import DGCalcError, InputError, MathematicalError, Report, StructureError

__all__ = ["DGCalcError", "InputError", "MathematicalError", "Report", "StructureError"]
