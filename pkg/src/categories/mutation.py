"""
Mutations de collections de complexes tordus.

Fonctionnalités :
- Évaluation canonique φ : C ⊗ Hom(C, D) -> D et coévaluation ψ : C -> D ⊗ Hom(C, D)*
- Mutations à gauche L_C D = Tot(C(φ)[-1]) et à droite R_D C = Tot(C(ψ))
- Action des mots de tresses sur une collection
- Matrice de Gram de la forme d'Euler et sa loi de transformation
"""

import re
from dataclasses import dataclass
from fractions import Fraction

import structlog

from src.algebra.cochain import dual
from src.categories.pretr import (
    TwistedComplex,
    TwistedMorphism,
    cone,
    differential,
    shift_tw,
    tensor_with_complex,
    twisted_hom,
)
from src.errors import InputError, MathematicalError, StructureError

logger = structlog.get_logger()

BRAID_LETTER = re.compile(r"^([LR])(\d+)$")


@dataclass
class Collection:
    base: object
    items: tuple

    def __post_init__(self):
        self.items = tuple(self.items)
        for item in self.items:
            if item.base is not self.base:
                raise StructureError("collection sur des categories de base differentes")

    def __len__(self) -> int:
        return len(self.items)

    def names(self) -> list:
        return [item.describe() for item in self.items]


@dataclass(frozen=True)
class BraidWord:
    letters: tuple

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        """Analyse un mot "L2 R1 L1" (indices à partir de 1)."""
        letters = []
        for token in text.split():
            match = BRAID_LETTER.match(token)
            if not match:
                raise InputError(f"lettre de tresse invalide : {token!r}")
            letters.append((int(match.group(2)), match.group(1)))
        return cls(tuple(letters))

    def __str__(self) -> str:
        return " ".join(f"{d}{i}" for i, d in self.letters)


def canonical_eval(c: TwistedComplex, d: TwistedComplex) -> TwistedMorphism:
    """
    φ : C ⊗ Hom(C, D) -> D, la composante sur la couche d'un vecteur de base e
    étant e lui-même (au niveau des chaînes, pas de la cohomologie).
    """
    hom = twisted_hom(c, d)
    source = tensor_with_complex(c, hom.complex)
    m = len(c.terms)
    entries = {}
    for layer, key in enumerate(hom.basis):
        i, j, a = key
        entries[(layer * m + i, j)] = {a: Fraction(1)}
    phi = TwistedMorphism(source, d, 0, entries)
    if not differential(phi).is_zero():
        raise MathematicalError("evaluation canonique non fermee", witness={"source": c.describe(), "target": d.describe()})
    return phi


def canonical_coeval(c: TwistedComplex, d: TwistedComplex) -> TwistedMorphism:
    """ψ : C -> D ⊗ Hom(C, D)*, composante (-1)^|e| e vers la couche de e*."""
    hom = twisted_hom(c, d)
    dual_space = dual(hom.complex)
    target = tensor_with_complex(d, dual_space)
    space = hom.complex.space
    m = len(d.terms)
    entries = {}
    for flat, (i, j, a) in enumerate(hom.basis):
        degree, pos = space.locate(flat)
        layer = dual_space.space.flat(-degree, pos)
        sign = -1 if degree % 2 else 1
        entries[(i, layer * m + j)] = {a: Fraction(sign)}
    psi = TwistedMorphism(c, target, 0, entries)
    if not differential(psi).is_zero():
        raise MathematicalError("coevaluation canonique non fermee", witness={"source": c.describe(), "target": d.describe()})
    return psi


def left_mutation(c: TwistedComplex, d: TwistedComplex) -> TwistedComplex:
    """L_C D = Tot(C(φ)[-1])."""
    phi = canonical_eval(c, d)
    result = shift_tw(cone(phi), -1)
    result.name = f"L_{c.describe()}({d.describe()})"
    logger.debug("left_mutation", source=c.describe(), target=d.describe(), terms=len(result.terms))
    return result


def right_mutation(d: TwistedComplex, c: TwistedComplex) -> TwistedComplex:
    """R_D C = Tot(C(ψ)) avec ψ : C -> D ⊗ Hom(C, D)*."""
    psi = canonical_coeval(c, d)
    result = cone(psi)
    result.name = f"R_{d.describe()}({c.describe()})"
    logger.debug("right_mutation", source=c.describe(), target=d.describe(), terms=len(result.terms))
    return result


def apply_braid(col: Collection, word: BraidWord) -> Collection:
    """
    Applique les lettres de gauche à droite.

    L_i : (E_i, E_{i+1}) -> (L_{E_i} E_{i+1}, E_i)
    R_i : (E_i, E_{i+1}) -> (E_{i+1}, R_{E_{i+1}} E_i)
    """
    items = list(col.items)
    for step, (i, direction) in enumerate(word.letters, start=1):
        if not 1 <= i <= len(items) - 1:
            raise InputError(f"etape {step} : indice {i} hors de [1, {len(items) - 1}]")
        first, second = items[i - 1], items[i]
        if direction == "L":
            items[i - 1], items[i] = left_mutation(first, second), first
        else:
            items[i - 1], items[i] = second, right_mutation(second, first)
        logger.info("braid_step", step=step, letter=f"{direction}{i}")
    return Collection(col.base, tuple(items))


# ==================== Formes d'Euler ====================

def hom_table(col: Collection) -> dict:
    """(i, j) -> dimensions de cohomologie de Hom(E_i, E_j)."""
    return {
        (i, j): twisted_hom(a, b).cohomology()
        for i, a in enumerate(col.items)
        for j, b in enumerate(col.items)
    }


def euler_number(dims: dict) -> int:
    return sum((-1) ** (k % 2) * h for k, h in dims.items())


def euler_form(col: Collection) -> list:
    """Matrice de Gram χ(E_i, E_j)."""
    table = hom_table(col)
    n = len(col)
    return [[euler_number(table[(i, j)]) for j in range(n)] for i in range(n)]


def mutated_euler_row(gram: list, i: int) -> list:
    """
    Ligne prédite de χ(L_{E_i} E_{i+1}, ·) sur les objets de la collection d'origine.

    Le décalage [-1] de la définition change le signe de la formule usuelle
    χ(F, ·) - χ(E, F) χ(E, ·).
    """
    e, f = i - 1, i
    return [-(gram[f][k] - gram[e][f] * gram[e][k]) for k in range(len(gram))]
