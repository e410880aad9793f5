"""Catégories DG, carquois DG, complexes tordus et mutations."""

from .dgcore import DGCategory, check_dg_axioms, collapse_CIJ, forward_subcategory, hom_cohomology
from .mutation import BraidWord, Collection, apply_braid, euler_form
from .pretr import TwistedComplex, TwistedMorphism, cone, full_subcategory, twisted_hom
from .quiver import DGQuiver, path_algebra, presentation_of

__all__ = [
    "DGCategory",
    "check_dg_axioms",
    "collapse_CIJ",
    "forward_subcategory",
    "hom_cohomology",
    "BraidWord",
    "Collection",
    "apply_braid",
    "euler_form",
    "TwistedComplex",
    "TwistedMorphism",
    "cone",
    "full_subcategory",
    "twisted_hom",
    "DGQuiver",
    "path_algebra",
    "presentation_of",
]
