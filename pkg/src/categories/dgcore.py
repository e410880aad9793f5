"""
Catégories DG finies à bases choisies.

Fonctionnalités :
- Structure `DGCategory` (complexes de morphismes, constantes de composition, unités)
- Vérification des axiomes (d² = 0, Leibniz, associativité, unités)
- Cohomologie des espaces de morphismes, exceptionnalité
- Sous-quotients : troncatures C_I et C_{I/J}, sous-catégorie ordonnée réduite

Conventions : la composition s'écrit de droite à gauche, g∘f, et
∂(g∘f) = ∂g∘f + (-1)^|g| g∘∂f. Les éléments sont des combinaisons creuses
{indice à plat: Fraction} dans la base de hom(i, j).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import structlog
from tqdm import tqdm

from src.algebra.cochain import CochainComplex, GradedVS, cohomology_dims, check_complex
from src.algebra.exactla import Matrix, complement_basis, independent_subset, kernel_basis, rref
from src.algebra.sparse import add_into, to_dense
from src.errors import MathematicalError, Report, StructureError, InputError

logger = structlog.get_logger()

EMPTY_COMPLEX = CochainComplex(GradedVS({}))


def format_combination(labels, vec) -> str:
    """Étiquette lisible d'une combinaison : "x", "-y", "2*x+y"..."""
    parts = []
    for i, x in enumerate(vec):
        if not x:
            continue
        sign = "-" if x < 0 else "+"
        magnitude = abs(x)
        body = labels[i] if magnitude == 1 else f"{magnitude}*{labels[i]}"
        parts.append((sign, body))
    if not parts:
        return "0"
    if len(parts) == 1 and parts[0][0] == "+":
        return parts[0][1]
    text = "".join(f"{s}{b}" for s, b in parts)
    return f"({text.lstrip('+')})"


@dataclass
class DGCategory:
    objects: tuple
    hom: dict
    compose_table: dict
    units: dict
    ordered: bool = False
    reduced: bool = False
    name: str = ""
    # (i, j, indice à plat) -> élément de la catégorie ambiante, pour les sous-quotients.
    provenance: dict = field(default_factory=dict, repr=False, compare=False)
    _d_sparse: dict = field(default_factory=dict, repr=False, compare=False)
    _degrees: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        for (i, j), c in self.hom.items():
            degrees = []
            for k in c.degrees():
                degrees.extend([k] * c.space.dim(k))
            self._degrees[(i, j)] = tuple(degrees)
            table = {}
            for k in c.degrees():
                src, tgt = c.space.offset(k), c.space.offset(k + 1)
                for (r, s), x in c.d(k).to_dok().items():
                    table.setdefault(src + s, {})[tgt + r] = x
            self._d_sparse[(i, j)] = table

    # ==================== Accès ====================

    @property
    def size(self) -> int:
        return len(self.objects)

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.size:
                raise InputError(f"objet inconnu : {name}")
            return name
        try:
            return self.objects.index(name)
        except ValueError:
            raise InputError(f"objet inconnu : {name}") from None

    def complex(self, i: int, j: int) -> CochainComplex:
        return self.hom.get((i, j), EMPTY_COMPLEX)

    def space(self, i: int, j: int) -> GradedVS:
        return self.complex(i, j).space

    def dim(self, i: int, j: int) -> int:
        return len(self._degrees.get((i, j), ()))

    def degree(self, i: int, j: int, a: int) -> int:
        return self._degrees[(i, j)][a]

    def basis(self, i: int, j: int, degree: Optional[int] = None) -> list:
        degrees = self._degrees.get((i, j), ())
        return [a for a, k in enumerate(degrees) if degree is None or k == degree]

    def label(self, i: int, j: int, a: int) -> str:
        return self.space(i, j).label(a)

    def pairs(self) -> list:
        return [(i, j) for i in range(self.size) for j in range(self.size)]

    def element_degree(self, i: int, j: int, f: dict) -> Optional[int]:
        degrees = {self.degree(i, j, a) for a in f}
        if len(degrees) > 1:
            raise StructureError(f"element inhomogene dans hom({i},{j}) : degres {sorted(degrees)}")
        return degrees.pop() if degrees else None

    # ==================== Structure ====================

    def unit(self, i: int) -> dict:
        return dict(self.units.get(i, {}))

    def unit_index(self, i: int) -> Optional[int]:
        u = self.units.get(i, {})
        if len(u) == 1:
            (a, x), = u.items()
            if x == 1:
                return a
        return None

    def compose_basis(self, i: int, j: int, k: int, b: int, a: int) -> dict:
        """b∘a pour a ∈ hom(i,j), b ∈ hom(j,k) (éléments de base)."""
        return self.compose_table.get((i, j, k), {}).get((b, a), {})

    def compose(self, i: int, j: int, k: int, g: dict, f: dict) -> dict:
        """g∘f, bilinéaire."""
        result = {}
        table = self.compose_table.get((i, j, k), {})
        for b, y in g.items():
            for a, x in f.items():
                value = table.get((b, a))
                if value:
                    add_into(result, value, x * y)
        return result

    def d(self, i: int, j: int, f: dict) -> dict:
        result = {}
        table = self._d_sparse.get((i, j), {})
        for a, x in f.items():
            column = table.get(a)
            if column:
                add_into(result, column, x)
        return result

    def d_basis(self, i: int, j: int, a: int) -> dict:
        return self._d_sparse.get((i, j), {}).get(a, {})

    def cohomology(self, i: int, j: int) -> dict:
        return cohomology_dims(self.complex(i, j))


# ==================== Vérifications ====================

def check_dg_axioms(c: DGCategory, show_progress: bool = False) -> Report:
    """Vérifie ∂² = 0, unités, Leibniz et associativité sur toutes les bases."""
    report = Report("axiomes DG")
    for (i, j) in c.pairs():
        sub = check_complex(c.complex(i, j))
        report.checked += sub.checked
        for failure in sub.failures:
            report.fail(kind="d2", pair=(c.objects[i], c.objects[j]), degree=failure["degree"])

    for i in range(c.size):
        u = c.unit(i)
        report.checked += 1
        if not u:
            report.fail(kind="unit missing", object=c.objects[i])
            continue
        if c.element_degree(i, i, u) != 0:
            report.fail(kind="unit degree", object=c.objects[i])
        if c.d(i, i, u):
            report.fail(kind="unit not closed", object=c.objects[i])
    for (i, j) in c.pairs():
        for a in c.basis(i, j):
            report.checked += 1
            e = {a: Fraction(1)}
            if c.compose(i, j, j, c.unit(j), e) != e or c.compose(i, i, j, e, c.unit(i)) != e:
                report.fail(kind="unit not neutral", pair=(c.objects[i], c.objects[j]), element=c.label(i, j, a))

    triples = list(product(range(c.size), repeat=3))
    iterator = tqdm(triples, desc="Leibniz", unit="triple") if show_progress else triples
    for (i, j, k) in iterator:
        for b in c.basis(j, k):
            g = {b: Fraction(1)}
            sign = -1 if c.degree(j, k, b) % 2 else 1
            dg = c.d(j, k, g)
            for a in c.basis(i, j):
                f = {a: Fraction(1)}
                lhs = c.d(i, k, c.compose(i, j, k, g, f))
                rhs = c.compose(i, j, k, dg, f)
                add_into(rhs, c.compose(i, j, k, g, c.d(i, j, f)), sign)
                report.checked += 1
                if lhs != rhs:
                    report.fail(kind="leibniz", chain=(c.label(j, k, b), c.label(i, j, a)))
                degree = c.degree(j, k, b) + c.degree(i, j, a)
                value = c.compose_basis(i, j, k, b, a)
                if value and c.element_degree(i, k, value) != degree:
                    report.fail(kind="composition degree", chain=(c.label(j, k, b), c.label(i, j, a)))

    quadruples = list(product(range(c.size), repeat=4))
    iterator = tqdm(quadruples, desc="Associativite", unit="quadruplet") if show_progress else quadruples
    for (i, j, k, l) in iterator:
        if not (c.dim(i, j) and c.dim(j, k) and c.dim(k, l)):
            continue
        for a in c.basis(i, j):
            f = {a: Fraction(1)}
            for b in c.basis(j, k):
                gf = c.compose_basis(i, j, k, b, a)
                for e in c.basis(k, l):
                    h = {e: Fraction(1)}
                    left = c.compose(i, k, l, h, gf)
                    right = c.compose(i, j, l, c.compose_basis(j, k, l, e, b), f)
                    report.checked += 1
                    if left != right:
                        report.fail(kind="associativity", chain=(c.label(k, l, e), c.label(j, k, b), c.label(i, j, a)))

    if c.ordered:
        for (i, j) in c.pairs():
            if i > j and c.dim(i, j):
                report.fail(kind="order", pair=(c.objects[i], c.objects[j]))
    if c.reduced:
        for i in range(c.size):
            if c.dim(i, i) != 1 or c.unit_index(i) is None:
                report.fail(kind="not reduced", object=c.objects[i])
    logger.debug("dg_axioms_checked", category=c.name, checked=report.checked, failures=len(report.failures))
    return report


def hom_cohomology(c: DGCategory) -> dict:
    """Table (i, j) -> {degré: dimension non nulle}."""
    return {(i, j): c.cohomology(i, j) for (i, j) in c.pairs()}


def named_table(c: DGCategory, table: dict) -> dict:
    return {(c.objects[i], c.objects[j]): dims for (i, j), dims in table.items()}


def exceptionality_report(c: DGCategory) -> Report:
    report = Report("collection exceptionnelle")
    table = hom_cohomology(c)
    for (i, j), dims in table.items():
        report.checked += 1
        if i == j and dims != {0: 1}:
            report.fail(object=c.objects[i], cohomology=dims)
        elif i > j and dims:
            report.fail(pair=(c.objects[i], c.objects[j]), cohomology=dims)
    return report


def is_exceptional_collection(c: DGCategory) -> bool:
    return exceptionality_report(c).ok


# ==================== Sous-quotients ====================

def local_vectors(c: DGCategory, i: int, j: int, degree: int, elements) -> list:
    """Convertit des éléments creux (indices à plat) en vecteurs denses du degré donné."""
    offset = c.space(i, j).offset(degree)
    n = c.space(i, j).dim(degree)
    return [to_dense({a - offset: x for a, x in e.items()}, n) for e in elements]


def subquotient(
    c: DGCategory,
    sub: dict,
    kill: Optional[dict] = None,
    prefer: Optional[dict] = None,
    ordered: bool = False,
    reduced: bool = False,
    name: str = "",
) -> DGCategory:
    """
    Sous-quotient S/K d'une catégorie DG.

    Args:
        c: catégorie ambiante
        sub: (i, j) -> {degré: liste de vecteurs denses engendrant S}
        kill: (i, j) -> {degré: vecteurs engendrant K ⊂ S} (idéal DG)
        prefer: (i, j) -> {degré: vecteurs essayés en premier pour la base}
        ordered, reduced: drapeaux du résultat

    Returns:
        DGCategory dont les bases sont des compléments de K dans S
    """
    kill = kill or {}
    prefer = prefer or {}
    new_basis, projector, components = {}, {}, {}
    for (i, j), by_degree in sub.items():
        space = c.space(i, j)
        labels = {}
        for k, vectors in sorted(by_degree.items()):
            n = space.dim(k)
            if n == 0:
                continue
            kv = kill.get((i, j), {}).get(k, [])
            kv = [kv[t] for t in independent_subset(kv, n)]
            candidates = list(prefer.get((i, j), {}).get(k, [])) + list(vectors)
            if not candidates:
                continue
            _, pivots = rref(Matrix.from_columns(kv + candidates, n))
            chosen = [candidates[p - len(kv)] for p in pivots if p >= len(kv)]
            if not chosen:
                continue
            frame = kv + chosen
            full = frame + complement_basis(frame, n)
            inverse = Matrix.from_domain(Matrix.from_columns(full, n).to_domain().inv())
            start = len(kv)
            projector[(i, j, k)] = Matrix(len(chosen), n, inverse.entries[start * n:(start + len(chosen)) * n])
            new_basis[(i, j, k)] = chosen
            base_labels = space.labels(k)
            labels[k] = _unique([format_combination(base_labels, v) for v in chosen])
        if labels:
            components[(i, j)] = GradedVS(labels)

    def project(i, j, element: dict) -> dict:
        """Élément ambiant (à plat) -> coordonnées à plat dans la nouvelle base."""
        if not element:
            return {}
        k = c.element_degree(i, j, element)
        p = projector.get((i, j, k))
        if p is None:
            return {}
        local = local_vectors(c, i, j, k, [element])[0]
        offset = components[(i, j)].offset(k)
        return {offset + t: x for t, x in enumerate(p.apply(local)) if x}

    def lift(i, j, k, t) -> dict:
        offset = c.space(i, j).offset(k)
        return {offset + s: x for s, x in enumerate(new_basis[(i, j, k)][t]) if x}

    lifts = {}
    for (i, j), space in components.items():
        for k in space.degrees():
            for t in range(space.dim(k)):
                lifts[(i, j, space.flat(k, t))] = lift(i, j, k, t)

    hom = {}
    for (i, j), space in components.items():
        doks = {}
        for k in space.degrees():
            for t in range(space.dim(k)):
                image = project(i, j, c.d(i, j, lifts[(i, j, space.flat(k, t))]))
                for flat, x in image.items():
                    degree, row = space.locate(flat)
                    doks.setdefault(k, {})[(row, t)] = x
        differential = {
            k: Matrix.from_sparse(space.dim(k + 1), space.dim(k), dok) for k, dok in doks.items()
        }
        hom[(i, j)] = CochainComplex(space, differential)

    table = {}
    for (i, j) in components:
        for (j2, k) in components:
            if j2 != j:
                continue
            entries = {}
            for a in range(components[(i, j)].total_dim):
                fa = lifts[(i, j, a)]
                for b in range(components[(j, k)].total_dim):
                    value = project(i, k, c.compose(i, j, k, lifts[(j, k, b)], fa)) if (i, k) in components else {}
                    if value:
                        entries[(b, a)] = value
            table[(i, j, k)] = entries

    units = {}
    for i in range(c.size):
        if (i, i) in components:
            units[i] = project(i, i, c.unit(i))
    result = DGCategory(
        c.objects, hom, table, units, ordered=ordered, reduced=reduced, name=name or c.name, provenance=lifts
    )
    logger.debug("subquotient_built", category=result.name, dims={f"{i}->{j}": s.total_dim for (i, j), s in components.items()})
    return result


def _unique(labels: list) -> list:
    seen, out = {}, []
    for label in labels:
        if label in seen:
            seen[label] += 1
            label = f"{label}#{seen[label]}"
        else:
            seen[label] = 0
        out.append(label)
    return out


def _standard(n: int) -> list:
    return [tuple(Fraction(int(s == t)) for s in range(n)) for t in range(n)]


def _unit_prefer(c: DGCategory) -> dict:
    prefer = {}
    for i in range(c.size):
        u = c.unit(i)
        if u:
            prefer[(i, i)] = {0: local_vectors(c, i, i, 0, [u])}
    return prefer


def rebase_units(c: DGCategory, name: str = "") -> DGCategory:
    """Même catégorie, bases choisies pour que chaque unité soit un vecteur de base."""
    sub = {(i, j): {k: _standard(c.space(i, j).dim(k)) for k in c.space(i, j).degrees()} for (i, j) in c.pairs() if c.dim(i, j)}
    return subquotient(c, sub, prefer=_unit_prefer(c), ordered=c.ordered, reduced=c.reduced, name=name)


def truncate_CI(c: DGCategory) -> tuple:
    """
    Troncature C_I : degrés négatifs ⊕ ker ∂⁰.

    Returns:
        (catégorie tronquée, inclusion) où l'inclusion associe à chaque paire la
        matrice des vecteurs de base dans l'espace ambiant (indexation à plat)
    """
    sub = {}
    for (i, j) in c.pairs():
        cx = c.complex(i, j)
        by_degree = {}
        for k in cx.degrees():
            n = cx.space.dim(k)
            if k < 0:
                by_degree[k] = _standard(n)
            elif k == 0:
                d0 = cx.d(0)
                by_degree[0] = kernel_basis(d0) if d0.rows else _standard(n)
        if by_degree:
            sub[(i, j)] = by_degree
    result = subquotient(c, sub, prefer=_unit_prefer(c), ordered=c.ordered, reduced=c.reduced, name=f"{c.name}_I")
    inclusion = {}
    for (i, j) in result.hom:
        columns = [result.provenance[(i, j, a)] for a in range(result.dim(i, j))]
        inclusion[(i, j)] = Matrix.from_columns([to_dense(v, c.dim(i, j)) for v in columns], c.dim(i, j))
    return result, inclusion


def collapse_CIJ(c: DGCategory) -> DGCategory:
    """
    Quotient C_{I/J} = C_I / (degrés < 0 ⊕ Im ∂⁻¹), isomorphe à H(C).

    Raises:
        MathematicalError: cohomologie non concentrée en degré 0 ("not quasi-ordinary")
    """
    for (i, j) in c.pairs():
        dims = c.cohomology(i, j)
        off = {k: v for k, v in dims.items() if k != 0}
        if off:
            raise MathematicalError(
                f"not quasi-ordinary : H^{min(off)}({c.objects[i]}, {c.objects[j]}) = {off[min(off)]}",
                witness={"pair": (c.objects[i], c.objects[j]), "cohomology": dims},
            )
    sub, kill = {}, {}
    for (i, j) in c.pairs():
        cx = c.complex(i, j)
        n = cx.space.dim(0)
        if n == 0:
            continue
        d0 = cx.d(0)
        sub[(i, j)] = {0: kernel_basis(d0) if d0.rows else _standard(n)}
        boundary = cx.d(-1)
        kill[(i, j)] = {0: boundary.columns() if boundary.cols else []}
    result = subquotient(c, sub, kill=kill, prefer=_unit_prefer(c), ordered=c.ordered, reduced=c.reduced, name=f"{c.name}_I/J")
    logger.info("category_collapsed", category=c.name, dims={f"{c.objects[i]}->{c.objects[j]}": result.dim(i, j) for (i, j) in result.pairs() if result.dim(i, j)})
    return result


def forward_subcategory(c: DGCategory, name: str = "") -> DGCategory:
    """
    Sous-catégorie ordonnée réduite : unités et morphismes i -> j pour i < j.

    Quasi-équivalente à `c` lorsque les objets forment une collection exceptionnelle.
    """
    sub = {}
    for (i, j) in c.pairs():
        if i < j and c.dim(i, j):
            sub[(i, j)] = {k: _standard(c.space(i, j).dim(k)) for k in c.space(i, j).degrees()}
        elif i == j:
            sub[(i, i)] = {0: local_vectors(c, i, i, 0, [c.unit(i)])}
    return subquotient(c, sub, ordered=True, reduced=True, name=name or f"{c.name}_<")
