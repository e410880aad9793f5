"""
Catégories A∞ données par tables d'opérations multilinéaires.

Fonctionnalités :
- Structure `AInfinityStructure` (m_n de degré 2 - n sur des chaînes composables)
- Plongement d'une catégorie DG (m_1 = ∂, m_2 = composition)
- Vérification des identités de Stasheff et de l'unité stricte
- Augmentation A = k{ob(A)} ⊕ Ā pour les structures réduites

Une chaîne est stockée dans l'ordre d'application : la clé
((o_0, ..., o_n), (x_1, ..., x_n)) désigne m_n(x_n, ..., x_1) avec
x_1 ∈ hom(o_0, o_1) appliqué en premier. Les identités de Stasheff sont
Σ (-1)^(r + st) m_(r+1+t)(1^r ⊗ m_s ⊗ 1^t) = 0, avec le signe de Koszul
(-1)^((2 - s)·|x|) pour chaque élément x écrit à gauche de m_s.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import structlog
from tqdm import tqdm

from config import engine_config
from src.algebra.cochain import GradedVS
from src.algebra.sparse import add_into
from src.categories.dgcore import DGCategory
from src.errors import InputError, MathematicalError, Report

logger = structlog.get_logger()


@dataclass
class AInfinityStructure:
    objects: tuple
    hom: dict
    ops: dict = field(default_factory=dict)
    max_arity: int = 2
    units: dict = field(default_factory=dict)
    ordered: bool = False
    name: str = ""

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self._degrees = {}
        for pair, space in self.hom.items():
            degrees = []
            for k in space.degrees():
                degrees.extend([k] * space.dim(k))
            self._degrees[pair] = tuple(degrees)

    @property
    def size(self) -> int:
        return len(self.objects)

    def space(self, i: int, j: int) -> GradedVS:
        return self.hom.get((i, j), GradedVS({}))

    def dim(self, i: int, j: int) -> int:
        return len(self._degrees.get((i, j), ()))

    def degree(self, i: int, j: int, a: int) -> int:
        return self._degrees[(i, j)][a]

    def label(self, i: int, j: int, a: int) -> str:
        return self.space(i, j).label(a)

    def chain_label(self, objs: tuple, idxs: tuple) -> str:
        """Écriture m(x_n, ..., x_1) d'une chaîne."""
        labels = [self.label(objs[p], objs[p + 1], a) for p, a in enumerate(idxs)]
        return "(" + ", ".join(reversed(labels)) + ")"

    def op(self, objs: tuple, idxs: tuple) -> dict:
        return self.ops.get(len(idxs), {}).get((tuple(objs), tuple(idxs)), {})

    def apply(self, objs: tuple, elements: list) -> dict:
        """m_n multilinéaire sur des éléments creux, dans l'ordre d'application."""
        result = {}
        supports = [sorted(e.items()) for e in elements]
        for combo in product(*supports):
            coeff = Fraction(1)
            idxs = []
            for a, x in combo:
                coeff *= x
                idxs.append(a)
            value = self.op(objs, tuple(idxs))
            if value:
                add_into(result, value, coeff)
        return result

    def chains(self, n: int, ordered_only: Optional[bool] = None) -> list:
        """Chaînes composables de longueur n entre éléments de base."""
        ordered_only = self.ordered if ordered_only is None else ordered_only
        result = []
        for objs in product(range(self.size), repeat=n + 1):
            if ordered_only and any(objs[p] > objs[p + 1] for p in range(n)):
                continue
            dims = [self.dim(objs[p], objs[p + 1]) for p in range(n)]
            if not all(dims):
                continue
            for idxs in product(*[range(d) for d in dims]):
                result.append((objs, idxs))
        return result

    def unit_index(self, i: int) -> Optional[int]:
        return self.units.get(i)

    def is_unit(self, i: int, j: int, a: int) -> bool:
        return i == j and self.units.get(i) == a


def from_dg(c: DGCategory, name: str = "") -> AInfinityStructure:
    """m_1 = ∂, m_2(g, f) = g∘f, m_(n≥3) = 0."""
    ops = {1: {}, 2: {}}
    for (i, j) in c.pairs():
        for a in c.basis(i, j):
            value = c.d_basis(i, j, a)
            if value:
                ops[1][((i, j), (a,))] = dict(value)
    for (i, j, k), table in c.compose_table.items():
        for (b, a), value in table.items():
            if value:
                ops[2][((i, j, k), (a, b))] = dict(value)
    units = {i: c.unit_index(i) for i in range(c.size) if c.unit_index(i) is not None}
    hom = {pair: cx.space for pair, cx in c.hom.items()}
    return AInfinityStructure(
        c.objects, hom, ops, max_arity=2, units=units, ordered=c.ordered, name=name or c.name
    )


# ==================== Identités ====================

def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def stasheff_residue(a: AInfinityStructure, objs: tuple, idxs: tuple) -> dict:
    """Membre de gauche de l'identité de Stasheff d'arité n sur une chaîne de base."""
    n = len(idxs)
    degrees = [a.degree(objs[p], objs[p + 1], x) for p, x in enumerate(idxs)]
    result = {}
    for s in range(1, n + 1):
        for t in range(0, n - s + 1):
            r = n - s - t
            inner = a.op(objs[t:t + s + 1], idxs[t:t + s])
            if not inner:
                continue
            left_degree = sum(degrees[t + s:])
            sign = _sign(r + s * t) * _sign((2 - s) * left_degree)
            outer_objs = objs[: t + 1] + objs[t + s:]
            for y, coeff in inner.items():
                value = a.op(outer_objs, idxs[:t] + (y,) + idxs[t + s:])
                if value:
                    add_into(result, value, sign * coeff)
    return result


def check_stasheff(a: AInfinityStructure, up_to: Optional[int] = None, show_progress: bool = False) -> Report:
    """Évalue les identités d'arité 1..up_to sur toutes les chaînes de base."""
    up_to = up_to or a.max_arity + 1
    report = Report("Stasheff")
    for n in range(1, up_to + 1):
        chains = a.chains(n)
        iterator = tqdm(chains, desc=f"Stasheff n={n}", unit="chaine") if show_progress else chains
        for objs, idxs in iterator:
            report.checked += 1
            residue = stasheff_residue(a, objs, idxs)
            if residue:
                target = (objs[0], objs[-1])
                report.fail(
                    arity=n,
                    chain=a.chain_label(objs, idxs),
                    residue={a.label(*target, y): str(x) for y, x in sorted(residue.items())},
                )
                logger.warning("stasheff_failure", arity=n, chain=a.chain_label(objs, idxs))
    logger.debug("stasheff_checked", structure=a.name, up_to=up_to, checked=report.checked)
    return report


def check_strict_unit(a: AInfinityStructure, up_to: Optional[int] = None) -> Report:
    """m_2(1, x) = x = m_2(x, 1) et m_n (n ≠ 2) nul dès qu'un argument est une unité."""
    report = Report("unite stricte")
    for i in range(a.size):
        report.checked += 1
        if a.unit_index(i) is None:
            report.fail(kind="unit missing", object=a.objects[i])
    up_to = up_to or a.max_arity
    for n in range(1, up_to + 1):
        for objs, idxs in a.chains(n):
            positions = [p for p, x in enumerate(idxs) if a.is_unit(objs[p], objs[p + 1], x)]
            if not positions:
                continue
            report.checked += 1
            value = a.op(objs, idxs)
            if n == 2:
                other = idxs[1 - positions[0]]
                if value != {other: Fraction(1)}:
                    report.fail(kind="unit not neutral", chain=a.chain_label(objs, idxs))
            elif value:
                report.fail(kind="unit not strict", arity=n, chain=a.chain_label(objs, idxs))
    return report


def effective_arity(a: AInfinityStructure) -> int:
    """Au-delà de N - 1 (N objets ordonnés), aucune chaîne réduite n'existe."""
    return max(2, a.size - 1)


def check_ordered_vanishing(a: AInfinityStructure) -> Report:
    """Pour une structure ordonnée réduite : m_n = 0 sur les chaînes réduites dès que n ≥ N."""
    report = Report("annulation ordonnee")
    for n, table in a.ops.items():
        if n < a.size:
            continue
        for (objs, idxs), value in table.items():
            reduced = not any(a.is_unit(objs[p], objs[p + 1], x) for p, x in enumerate(idxs))
            report.checked += 1
            if reduced and value:
                report.fail(arity=n, chain=a.chain_label(objs, idxs))
    return report


# ==================== Augmentation ====================

@dataclass
class Augmentation:
    structure: AInfinityStructure
    reduced: dict

    def is_reduced(self, i: int, j: int, a: int) -> bool:
        return a in self.reduced.get((i, j), ())


def augment(a: AInfinityStructure) -> Augmentation:
    """
    Décomposition A = k{ob(A)} ⊕ Ā.

    Raises:
        MathematicalError: unité manquante, endomorphismes autres que l'unité,
            ou morphismes réduits formant un cycle
    """
    for i in range(a.size):
        unit = a.unit_index(i)
        if unit is None or a.dim(i, i) != 1:
            raise MathematicalError(
                f"not augmentable : End({a.objects[i]}) n'est pas reduit a l'unite",
                witness={"object": a.objects[i], "dim": a.dim(i, i)},
            )
    for i in range(a.size):
        for j in range(i + 1, a.size):
            if a.dim(i, j) and a.dim(j, i):
                raise MathematicalError(
                    f"not augmentable : morphismes dans les deux sens entre {a.objects[i]} et {a.objects[j]}",
                    witness={"pair": (a.objects[i], a.objects[j])},
                )
    reduced = {
        (i, j): tuple(range(a.dim(i, j)))
        for i in range(a.size)
        for j in range(a.size)
        if i != j and a.dim(i, j)
    }
    return Augmentation(a, reduced)


def default_arity(c, max_arity: Optional[int]) -> int:
    """Borne d'arité : explicite, ou N - 1 pour une catégorie ordonnée."""
    if max_arity is not None:
        return max_arity
    if not c.ordered:
        raise InputError(
            f"categorie non ordonnee : borne d'arite explicite requise (par exemple {engine_config.max_arity})"
        )
    return max(2, c.size - 1)
