"""Surfaces rationnelles et extensions universelles."""

from .surfaces import PicardLattice, augment_chain, chi, parse_divisor
from .uext import tilting_collection, universal_extension

__all__ = ["PicardLattice", "augment_chain", "chi", "parse_divisor", "tilting_collection", "universal_extension"]
