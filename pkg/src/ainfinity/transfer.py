"""
Transfert homotopique : modèle minimal A∞ d'une catégorie DG.

Fonctionnalités :
- Scindage (ι, π, h) de chaque complexe de morphismes, adapté aux unités
- Sommation sur les arbres planaires dans la convention suspendue
- Produits de Massey triples avec leur indétermination
- Profil de Massey invariant par changement de base
- Strictification des unités (identité lorsque le scindage suffit)

Convention suspendue : b_n(x_n, ..., x_1) = -ε m_n(x_n, ..., x_1) avec
ε = (-1)^(Σ (i-1)(|x_i|-1)), x_1 étant l'argument le plus à droite ;
en particulier b_2(a, b) = (-1)^|a| ab. Le transfert calcule
Λ_1 = ι, λ_k = Σ_(i+j=k) b_2(Λ_i ⊗ Λ_j), Λ_k = h λ_k et b'_n = π λ_n.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import structlog
from tqdm import tqdm

from src.ainfinity.ainfty import AInfinityStructure, check_strict_unit, default_arity
from src.algebra.cochain import GradedVS, cohomology_basis
from src.algebra.exactla import Matrix, independent_subset, kernel_basis, rank
from src.algebra.sparse import add_into, to_dense
from src.categories.dgcore import DGCategory, format_combination
from src.errors import InputError, MathematicalError

logger = structlog.get_logger()


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def suspension_sign(degrees) -> int:
    """ε pour des degrés donnés dans l'ordre d'application (x_1 d'abord)."""
    return _sign(sum(i * (d - 1) for i, d in enumerate(degrees)))


@dataclass
class TransferData:
    category: DGCategory
    splittings: dict
    strategy: str = "first"
    # (i, j) -> [(degré, indice local du représentant)] dans l'ordre des classes
    classes: dict = field(default_factory=dict)
    lambda_cache: dict = field(default_factory=dict, repr=False)

    def iota(self, i: int, j: int, a: int) -> dict:
        """Représentant (à plat dans la catégorie) de la classe a de H(i, j)."""
        degree, pos = self.classes[(i, j)][a]
        split = self.splittings[(i, j)]
        offset = split.complex.space.offset(degree)
        rep = split.representatives[degree][pos]
        return {offset + t: x for t, x in enumerate(rep) if x}

    def _local(self, i: int, j: int, element: dict) -> tuple:
        degree = self.category.element_degree(i, j, element)
        space = self.category.space(i, j)
        offset = space.offset(degree)
        return degree, to_dense({a - offset: x for a, x in element.items()}, space.dim(degree))

    def pi(self, i: int, j: int, element: dict) -> dict:
        """Projection d'un élément homogène sur les classes de H(i, j)."""
        if not element:
            return {}
        degree, local = self._local(i, j, element)
        split = self.splittings[(i, j)]
        if degree not in split.pi:
            return {}
        coords = split.pi[degree].apply(local)
        first = self.class_offset(i, j, degree)
        return {first + t: x for t, x in enumerate(coords) if x}

    def h(self, i: int, j: int, element: dict) -> dict:
        if not element:
            return {}
        degree, local = self._local(i, j, element)
        split = self.splittings[(i, j)]
        image = split.homotopy(degree).apply(local)
        offset = self.category.space(i, j).offset(degree - 1)
        return {offset + t: x for t, x in enumerate(image) if x}

    def class_offset(self, i: int, j: int, degree: int) -> int:
        return sum(1 for k, _ in self.classes.get((i, j), ()) if k < degree)


@dataclass
class MinimalModel:
    structure: AInfinityStructure
    transfer: TransferData

    @property
    def category(self) -> DGCategory:
        return self.transfer.category


def _splittings(c: DGCategory, strategy: str) -> TransferData:
    splittings, classes, spaces = {}, {}, {}
    for (i, j) in c.pairs():
        if not c.dim(i, j):
            continue
        split = cohomology_basis(c.complex(i, j), strategy=strategy)
        labels = c.space(i, j)
        components, order = {}, []
        for degree in sorted(split.representatives):
            reps = split.representatives[degree]
            if not reps:
                continue
            names = labels.labels(degree)
            components[degree] = [f"[{format_combination(names, v)}]" for v in reps]
            order.extend((degree, pos) for pos in range(len(reps)))
        splittings[(i, j)] = split
        if order:
            classes[(i, j)] = order
            spaces[(i, j)] = GradedVS(components)
    data = TransferData(c, splittings, strategy, classes)
    return data, spaces


def _lambda(data: TransferData, mm_degrees: dict, objs: tuple, idxs: tuple) -> dict:
    """λ_k sur une chaîne de classes (k ≥ 2), mémoïsé par sous-chaîne."""
    key = (objs, idxs)
    cached = data.lambda_cache.get(key)
    if cached is not None:
        return cached
    c = data.category
    k = len(idxs)
    result = {}
    for j in range(1, k):
        # partie droite : x_1..x_j (appliquée d'abord), partie gauche : x_(j+1)..x_k
        right = _big_lambda(data, mm_degrees, objs[: j + 1], idxs[:j])
        if not right:
            continue
        left = _big_lambda(data, mm_degrees, objs[j:], idxs[j:])
        if not left:
            continue
        left_degree = sum(mm_degrees[(objs[j + p], objs[j + p + 1])][x] for p, x in enumerate(idxs[j:])) - (k - j) + 1
        product = c.compose(objs[0], objs[j], objs[-1], left, right)
        add_into(result, product, _sign(left_degree))
    data.lambda_cache[key] = result
    return result


def _big_lambda(data: TransferData, mm_degrees: dict, objs: tuple, idxs: tuple) -> dict:
    if len(idxs) == 1:
        return data.iota(objs[0], objs[1], idxs[0])
    return data.h(objs[0], objs[-1], _lambda(data, mm_degrees, objs, idxs))


def minimal_model(
    c: DGCategory,
    max_arity: Optional[int] = None,
    strategy: str = "first",
    show_progress: bool = False,
) -> MinimalModel:
    """
    Modèle minimal par transfert homotopique.

    Args:
        c: catégorie DG vérifiant les axiomes
        max_arity: arité maximale calculée (par défaut N - 1 si `c` est ordonnée)
        strategy: choix du complément dans le scindage ("first" ou "last")

    Returns:
        MinimalModel avec m_1 = 0 et m_2 induit
    """
    arity = default_arity(c, max_arity)
    if arity < 2:
        raise InputError("max_arity doit etre >= 2")
    data, spaces = _splittings(c, strategy)
    structure = AInfinityStructure(c.objects, spaces, {}, max_arity=arity, ordered=c.ordered, name=f"{c.name}_min")
    degrees = {pair: [structure.degree(*pair, a) for a in range(structure.dim(*pair))] for pair in spaces}
    for i in range(c.size):
        unit = c.unit(i)
        if unit:
            classes = data.pi(i, i, unit)
            if len(classes) == 1 and next(iter(classes.values())) == 1 and data.iota(i, i, next(iter(classes))) == unit:
                structure.units[i] = next(iter(classes))

    for n in range(2, arity + 1):
        chains = structure.chains(n)
        iterator = tqdm(chains, desc=f"Transfert m{n}", unit="chaine") if show_progress else chains
        table = {}
        for objs, idxs in iterator:
            lam = _lambda(data, degrees, objs, idxs)
            if not lam:
                continue
            value = data.pi(objs[0], objs[-1], lam)
            if not value:
                continue
            chain_degrees = [degrees[(objs[p], objs[p + 1])][x] for p, x in enumerate(idxs)]
            sign = -suspension_sign(chain_degrees)
            table[(objs, idxs)] = {y: sign * x for y, x in value.items()}
        structure.ops[n] = table
    logger.info(
        "minimal_model_built",
        category=c.name,
        max_arity=arity,
        strategy=strategy,
        ops={n: len(t) for n, t in structure.ops.items()},
    )
    return MinimalModel(structure, data)


def strictify(mm: MinimalModel) -> MinimalModel:
    """Identité si les unités sont déjà strictes ; sinon erreur documentée."""
    report = check_strict_unit(mm.structure)
    if report.ok:
        return mm
    raise MathematicalError("strictification non realisee : unites non strictes apres transfert", witness=report.failures[:3])


# ==================== Produits de Massey ====================

@dataclass
class MasseyCoset:
    """Valeur m_3(x, y, z) et sous-espace d'indétermination dans H(o_0, o_3)."""

    value: dict
    indeterminacy: list
    degree: int
    dim: int
    offset: int

    def local(self, element: dict) -> tuple:
        return to_dense({a - self.offset: x for a, x in element.items()}, self.dim)

    def contains(self, element: dict) -> bool:
        """element ∈ valeur + indétermination."""
        difference = add_into(dict(self.value), element, -1)
        return self._in_span(difference)

    def contains_zero(self) -> bool:
        return self._in_span(self.value)

    def _in_span(self, element: dict) -> bool:
        if not element:
            return True
        vector = self.local(element)
        if not self.indeterminacy:
            return False
        before = rank(Matrix.from_columns(self.indeterminacy, self.dim))
        after = rank(Matrix.from_columns(list(self.indeterminacy) + [vector], self.dim))
        return before == after


def _class_element(x) -> dict:
    if isinstance(x, int):
        return {x: Fraction(1)}
    return dict(x)


def _degree(a: AInfinityStructure, i: int, j: int, x: dict) -> Optional[int]:
    degrees = {a.degree(i, j, y) for y in x}
    if len(degrees) > 1:
        raise InputError("classe inhomogene dans un produit de Massey")
    return degrees.pop() if degrees else None


def massey3(mm: MinimalModel, objs: tuple, x, y, z) -> MasseyCoset:
    """
    Produit de Massey ⟨x, y, z⟩ pour z : o_0 -> o_1, y : o_1 -> o_2, x : o_2 -> o_3.

    Raises:
        MathematicalError: m_2(x, y) ≠ 0 ou m_2(y, z) ≠ 0 ("Massey product undefined")
    """
    a = mm.structure
    if len(objs) != 4:
        raise InputError("un produit de Massey triple demande quatre objets")
    o0, o1, o2, o3 = objs
    x = _class_element(x)
    y = _class_element(y)
    z = _class_element(z)
    if a.apply((o1, o2, o3), [y, x]) or a.apply((o0, o1, o2), [z, y]):
        raise MathematicalError(
            "Massey product undefined : m2(x, y) ou m2(y, z) non nul",
            witness={"chain": tuple(a.objects[o] for o in objs)},
        )
    value = a.apply((o0, o1, o2, o3), [z, y, x])
    dx, dy, dz = (_degree(a, o2, o3, x) or 0), (_degree(a, o1, o2, y) or 0), (_degree(a, o0, o1, z) or 0)
    degree = dx + dy + dz - 1
    space = a.space(o0, o3)
    generators = []
    # x ∘ H(o_0, o_2) et H(o_1, o_3) ∘ z, dans le degré de la valeur
    for w in range(a.dim(o0, o2)):
        if a.degree(o0, o2, w) == dy + dz - 1:
            generators.append(a.apply((o0, o2, o3), [{w: Fraction(1)}, x]))
    for w in range(a.dim(o1, o3)):
        if a.degree(o1, o3, w) == dx + dy - 1:
            generators.append(a.apply((o0, o1, o3), [z, {w: Fraction(1)}]))
    dim = space.dim(degree)
    offset = space.offset(degree)
    vectors = [to_dense({b - offset: v for b, v in g.items()}, dim) for g in generators if g]
    vectors = [vectors[t] for t in independent_subset(vectors, dim)] if vectors else []
    return MasseyCoset(value, vectors, degree, dim, offset)


def massey_profile(mm: MinimalModel) -> dict:
    """
    Rang de x ↦ m_3(x, y, z) modulo x∘H + H∘z, pour y et z engendrant des
    espaces de classes de dimension 1, x parcourant {x : m_2(x, y) = 0}.

    Le résultat ne dépend pas des bases choisies ; clé
    (o_0, o_1, o_2, o_3, |x|, |y|, |z|) -> rang non nul.
    """
    a = mm.structure
    profile = {}
    for objs in _object_chains(a, 3):
        o0, o1, o2, o3 = objs
        for dz in a.space(o0, o1).degrees():
            if a.space(o0, o1).dim(dz) != 1:
                continue
            for dy in a.space(o1, o2).degrees():
                if a.space(o1, o2).dim(dy) != 1:
                    continue
                z = {a.space(o0, o1).offset(dz): Fraction(1)}
                y = {a.space(o1, o2).offset(dy): Fraction(1)}
                if a.apply((o0, o1, o2), [z, y]):
                    continue
                for dx in a.space(o2, o3).degrees():
                    rank_value = _massey_rank(a, objs, z, y, dx, dy, dz)
                    if rank_value:
                        profile[(o0, o1, o2, o3, dx, dy, dz)] = rank_value
    logger.debug("massey_profile", structure=a.name, entries=len(profile))
    return profile


def _object_chains(a: AInfinityStructure, length: int) -> list:
    chains = [(o,) for o in range(a.size)]
    for _ in range(length):
        chains = [c + (o,) for c in chains for o in range(a.size) if o != c[-1] and a.dim(c[-1], o)]
    return chains


def _massey_rank(a: AInfinityStructure, objs: tuple, z: dict, y: dict, dx: int, dy: int, dz: int) -> int:
    o0, o1, o2, o3 = objs
    sx = a.space(o2, o3)
    first = sx.offset(dx)
    candidates = [{first + t: Fraction(1)} for t in range(sx.dim(dx))]
    target = a.space(o1, o3)
    # noyau de x ↦ m_2(x, y)
    images = [a.apply((o1, o2, o3), [y, x]) for x in candidates]
    degree_xy = dx + dy
    tdim, toff = target.dim(degree_xy), target.offset(degree_xy)
    if tdim:
        columns = [to_dense({b - toff: v for b, v in img.items()}, tdim) for img in images]
        kernel = kernel_basis(Matrix.from_columns(columns, tdim))
    else:
        kernel = [tuple(Fraction(int(s == t)) for s in range(len(candidates))) for t in range(len(candidates))]
    if not kernel:
        return 0
    degree = dx + dy + dz - 1
    space = a.space(o0, o3)
    dim, offset = space.dim(degree), space.offset(degree)
    if not dim:
        return 0
    kernel_elements = [{first + t: v for t, v in enumerate(k) if v} for k in kernel]
    generators = []
    for x in kernel_elements:
        for w in range(a.dim(o0, o2)):
            if a.degree(o0, o2, w) == dy + dz - 1:
                generators.append(a.apply((o0, o2, o3), [{w: Fraction(1)}, x]))
    for w in range(a.dim(o1, o3)):
        if a.degree(o1, o3, w) == dx + dy - 1:
            generators.append(a.apply((o0, o1, o3), [z, {w: Fraction(1)}]))
    values = [a.apply((o0, o1, o2, o3), [z, y, x]) for x in kernel_elements]

    def dense(e):
        return to_dense({b - offset: v for b, v in e.items()}, dim)

    indeterminacy = [dense(g) for g in generators if g]
    base_rank = rank(Matrix.from_columns(indeterminacy, dim)) if indeterminacy else 0
    total = indeterminacy + [dense(v) for v in values]
    return rank(Matrix.from_columns(total, dim)) - base_rank
