"""
Package de stockage.

Fournit la lecture et l'écriture :
- des carquois DG (.dgq) et de leurs familles à paramètre
- des structures A∞ (.ainf)
"""

from .ainf_file import load_ainf, save_ainf
from .dgq_file import DeformationFamily, DgqFile

__all__ = ["load_ainf", "save_ainf", "DeformationFamily", "DgqFile"]
