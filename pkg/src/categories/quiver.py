"""
Carquois DG : flèches graduées, différentielle sur les flèches, relations.

Fonctionnalités :
- Validation (composabilité, homogénéité des relations)
- Algèbre de chemins modulo l'idéal des relations, tronquée en longueur
- Vérification ∂(relation) ∈ idéal et ∂²(flèche) ∈ idéal
- Changements de jauge (substitution de flèches)
- Extraction d'une présentation par carquois DG d'une catégorie ordonnée réduite

Un chemin est un tuple de noms de flèches écrit de gauche à droite, la flèche
la plus à droite agissant en premier : ("gamma1", "beta", "alpha").
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import structlog

from config import engine_config
from src.algebra.cochain import CochainComplex, GradedVS
from src.algebra.exactla import (
    Matrix,
    complement_basis,
    independent_subset,
    intersection_basis,
    kernel_basis,
    rref,
    solve,
    unit_vector,
)
from src.algebra.sparse import add_into, to_dense
from src.categories.dgcore import DGCategory, local_vectors
from src.errors import InputError, MathematicalError, Report

logger = structlog.get_logger()


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str
    degree: int = 0


def path_label(path: tuple) -> str:
    return "*".join(path)


def unit_label(vertex: str) -> str:
    return f"id_{vertex}"


@dataclass
class DGQuiver:
    vertices: tuple
    arrows: tuple
    differential: dict = field(default_factory=dict)
    relations: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        self.arrows = tuple(self.arrows)
        self._by_name = {}
        for a in self.arrows:
            if a.name in self._by_name:
                raise InputError(f"fleche dupliquee : {a.name}")
            if a.src not in self.vertices or a.tgt not in self.vertices:
                raise InputError(f"fleche {a.name} : sommet inconnu")
            self._by_name[a.name] = a
        for name, combo in self.differential.items():
            arrow = self.arrow(name)
            for path in combo:
                s, t, k = self.signature(path)
                if (s, t, k) != (arrow.src, arrow.tgt, arrow.degree + 1):
                    raise InputError(f"differentielle de {name} : terme {path_label(path)} incompatible")
        for number, relation in enumerate(self.relations):
            signatures = {self.signature(path) for path in relation}
            if len(signatures) > 1:
                raise InputError(f"relation {number} inhomogene : {sorted(signatures)}")

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"fleche inconnue : {name}") from None

    def signature(self, path: tuple) -> tuple:
        """(source, but, degré) d'un chemin non vide."""
        if not path:
            raise InputError("chemin vide dans une combinaison")
        arrows = [self.arrow(name) for name in path]
        for left, right in zip(arrows, arrows[1:]):
            if right.tgt != left.src:
                raise InputError(f"chemin non composable : {path_label(path)}")
        return arrows[-1].src, arrows[0].tgt, sum(a.degree for a in arrows)

    def d_path(self, path: tuple) -> dict:
        """Extension de Leibniz : le signe compte les degrés des flèches à gauche."""
        result = {}
        left_degree = 0
        for m, name in enumerate(path):
            sign = -1 if left_degree % 2 else 1
            for sub, x in self.differential.get(name, {}).items():
                add_into(result, {path[:m] + sub + path[m + 1:]: x}, sign)
            left_degree += self.arrow(name).degree
        return result

    def d_combo(self, combo: dict) -> dict:
        result = {}
        for path, x in combo.items():
            add_into(result, self.d_path(path), x)
        return result


# ==================== Algèbre de chemins ====================

class PathAlgebra:
    """
    Quotient de la catégorie des chemins de longueur <= L par l'idéal des relations.

    Dans chaque bloc (source, but, degré) les chemins sont ordonnés du plus long
    au plus court puis lexicographiquement ; les chemins pivots de la réduction
    de l'idéal s'expriment en fonction des autres, qui forment la base.
    """

    def __init__(self, quiver: DGQuiver, max_path_len: Optional[int] = None):
        self.quiver = quiver
        self.max_path_len = max_path_len or engine_config.max_path_len
        if self.max_path_len < 1:
            raise InputError("max_path_len doit etre >= 1")
        self.paths = {}
        self.ideal_rank = {}
        self.normal_form = {}
        self.basis = {}
        self._enumerate()
        self._reduce()
        self._check_stabilized()
        self.category = self._build_category()
        logger.info(
            "path_algebra_built",
            quiver=quiver.name,
            vertices=len(quiver.vertices),
            max_path_len=self.max_path_len,
            total_dim=sum(len(v) for v in self.basis.values()),
        )

    def _enumerate(self) -> None:
        q = self.quiver
        frontier = [(a.name,) for a in q.arrows]
        length = 1
        while frontier and length <= self.max_path_len:
            nxt = []
            for path in frontier:
                self.paths.setdefault(q.signature(path), []).append(path)
                if length < self.max_path_len:
                    tgt = q.arrow(path[0]).tgt
                    nxt.extend((a.name,) + path for a in q.arrows if a.src == tgt)
            frontier = nxt
            length += 1
        self._from = {}
        self._to = {}
        for (s, t, k), paths in self.paths.items():
            for p in paths:
                self._from.setdefault(s, []).append(p)
                self._to.setdefault(t, []).append(p)

    def _ideal_generators(self) -> dict:
        q = self.quiver
        generators = {}
        for relation in q.relations:
            if not relation:
                continue
            s, t, k = q.signature(next(iter(relation)))
            rights = [()] + self._to.get(s, [])
            lefts = [()] + self._from.get(t, [])
            for v in rights:
                kv = sum(q.arrow(n).degree for n in v)
                sv = q.arrow(v[-1]).src if v else s
                for u in lefts:
                    if len(u) + len(v) + 1 > self.max_path_len:
                        continue
                    element = {}
                    for path, x in relation.items():
                        full = u + path + v
                        if len(full) <= self.max_path_len:
                            element[full] = x
                    if not element:
                        continue
                    tu = q.arrow(u[0]).tgt if u else t
                    ku = sum(q.arrow(n).degree for n in u)
                    generators.setdefault((sv, tu, k + ku + kv), []).append(element)
        return generators

    @staticmethod
    def _order_key(path: tuple) -> tuple:
        return (-len(path), path)

    def _reduce(self) -> None:
        generators = self._ideal_generators()
        for key, paths in self.paths.items():
            ordered = sorted(paths, key=self._order_key)
            column = {p: n for n, p in enumerate(ordered)}
            rows = [to_dense({column[p]: x for p, x in g.items()}, len(ordered)) for g in generators.get(key, [])]
            pivots = ()
            reduced = None
            if rows:
                reduced, pivots = rref(Matrix.from_rows(rows))
            self.ideal_rank[key] = len(pivots)
            basis = [p for n, p in enumerate(ordered) if n not in pivots]
            self.basis[key] = sorted(basis, key=lambda p: (len(p), p))
            for p in basis:
                self.normal_form[p] = {p: Fraction(1)}
            for r, n in enumerate(pivots):
                form = {}
                for f, p in enumerate(ordered):
                    if f not in pivots and reduced[r, f]:
                        form[p] = -reduced[r, f]
                self.normal_form[ordered[n]] = form

    def _check_stabilized(self) -> None:
        for key, basis in self.basis.items():
            for p in basis:
                if len(p) > self.max_path_len - engine_config.stabilization_margin:
                    raise MathematicalError(
                        f"l'algebre de chemins ne se stabilise pas a la longueur {self.max_path_len} : "
                        f"{path_label(p)} est non nul",
                        witness=path_label(p),
                    )

    def reduce(self, combo: dict) -> dict:
        """Forme normale d'une combinaison de chemins (les chemins trop longs sont nuls)."""
        result = {}
        for path, x in combo.items():
            if not path:
                add_into(result, {(): Fraction(1)}, x)
            elif len(path) <= self.max_path_len:
                add_into(result, self.normal_form.get(path, {}), x)
        return result

    # Les unités sont représentées par le chemin vide dans les combinaisons.
    def _basis_index(self, s: str, t: str) -> tuple:
        components, index = {}, {}
        if s == t:
            components[0] = [unit_label(s)]
            index[()] = (0, 0)
        for (ps, pt, k), basis in sorted(self.basis.items(), key=lambda item: item[0][2]):
            if (ps, pt) != (s, t):
                continue
            labels = components.setdefault(k, [])
            for p in basis:
                index[p] = (k, len(labels))
                labels.append(path_label(p))
        return GradedVS(components), index

    def _build_category(self) -> DGCategory:
        q = self.quiver
        vertices = q.vertices
        spaces, flat = {}, {}
        for i, s in enumerate(vertices):
            for j, t in enumerate(vertices):
                space, index = self._basis_index(s, t)
                if space.total_dim:
                    spaces[(i, j)] = space
                    flat[(i, j)] = {p: space.flat(k, n) for p, (k, n) in index.items()}
        self._flat = flat
        self._paths_of = {pair: {v: p for p, v in table.items()} for pair, table in flat.items()}

        hom = {}
        for (i, j), space in spaces.items():
            doks = {}
            for path, a in flat[(i, j)].items():
                k, col = space.locate(a)
                image = self.reduce(q.d_path(path)) if path else {}
                for p, x in image.items():
                    kk, row = space.locate(flat[(i, j)][p])
                    doks.setdefault(k, {})[(row, col)] = x
            differential = {k: Matrix.from_sparse(space.dim(k + 1), space.dim(k), dok) for k, dok in doks.items()}
            hom[(i, j)] = CochainComplex(space, differential)

        table = {}
        n = len(vertices)
        for i in range(n):
            for j in range(n):
                if (i, j) not in flat:
                    continue
                for k in range(n):
                    if (j, k) not in flat or (i, k) not in flat:
                        continue
                    entries = {}
                    for pa, a in flat[(i, j)].items():
                        for pb, b in flat[(j, k)].items():
                            image = self.reduce({pb + pa: Fraction(1)})
                            if image:
                                entries[(b, a)] = {flat[(i, k)][p]: x for p, x in image.items()}
                    table[(i, j, k)] = entries
        units = {i: {flat[(i, i)][()]: Fraction(1)} for i in range(n)}
        return DGCategory(vertices, hom, table, units, name=q.name)

    def element(self, combo: dict) -> tuple:
        """Combinaison homogène de chemins -> (i, j, élément creux à plat)."""
        path = next(iter(combo))
        s, t, _ = self.quiver.signature(path)
        i, j = self.quiver.vertices.index(s), self.quiver.vertices.index(t)
        return i, j, {self._flat[(i, j)][p]: x for p, x in self.reduce(combo).items()}

    def ideal_dims(self) -> dict:
        """(source, but, degré) -> dimension de l'idéal dans l'espace des chemins tronqué."""
        return {key: rank for key, rank in self.ideal_rank.items() if rank}

    def chain_dims(self) -> dict:
        c = self.category
        return {(c.objects[i], c.objects[j]): c.space(i, j).dims() for (i, j) in c.pairs() if c.dim(i, j)}


def path_algebra(q: DGQuiver, max_path_len: Optional[int] = None) -> DGCategory:
    return PathAlgebra(q, max_path_len).category


def check_quiver(q: DGQuiver, max_path_len: Optional[int] = None) -> Report:
    """Vérifie ∂(relation) ∈ idéal et ∂²(flèche) ∈ idéal."""
    algebra = PathAlgebra(q, max_path_len)
    report = Report("carquois DG")
    for number, relation in enumerate(q.relations):
        report.checked += 1
        residue = algebra.reduce(q.d_combo(relation))
        if residue:
            report.fail(kind="relation not closed", relation=number,
                        residue={path_label(p): str(x) for p, x in residue.items()})
    for arrow in q.arrows:
        report.checked += 1
        residue = algebra.reduce(q.d_combo(q.differential.get(arrow.name, {})))
        if residue:
            report.fail(kind="d2", arrow=arrow.name, residue={path_label(p): str(x) for p, x in residue.items()})
    return report


# ==================== Jauge ====================

def substitute(combo: dict, substitution: dict) -> dict:
    result = {}
    for path, x in combo.items():
        expansions = {(): Fraction(1)}
        for name in path:
            replacement = substitution.get(name, {(name,): Fraction(1)})
            nxt = {}
            for prefix, y in expansions.items():
                for sub, z in replacement.items():
                    add_into(nxt, {prefix + sub: y * z})
            expansions = nxt
        add_into(result, expansions, x)
    return result


def apply_gauge(q: DGQuiver, substitution: dict, name: str = "") -> DGQuiver:
    """
    Substitue des combinaisons aux flèches dans les relations et la différentielle.

    La substitution doit être inversible (par exemple a -> a + chemins ne
    contenant pas a) et compatible avec ∂ ; `check_quiver` valide le résultat.
    """
    for arrow_name, combo in substitution.items():
        arrow = q.arrow(arrow_name)
        for path in combo:
            if q.signature(path) != (arrow.src, arrow.tgt, arrow.degree):
                raise InputError(f"substitution de {arrow_name} incompatible : {path_label(path)}")
    differential = {a: substitute(combo, substitution) for a, combo in q.differential.items()}
    relations = [substitute(r, substitution) for r in q.relations]
    return DGQuiver(q.vertices, q.arrows, differential, [r for r in relations if r], name=name or f"{q.name}_gauge")


# ==================== Extraction d'une présentation ====================

@dataclass
class Presentation:
    quiver: DGQuiver
    elements: dict


def _path_element(c: DGCategory, arrows: dict, path: tuple) -> tuple:
    """Évalue un chemin de flèches dans c : (source, but, élément)."""
    src, tgt, element = arrows[path[-1]]
    for name in reversed(path[:-1]):
        s, t, e = arrows[name]
        element = c.compose(src, tgt, t, e, element)
        tgt = t
    return src, tgt, element


def presentation_of(c: DGCategory) -> Presentation:
    """
    Présentation par carquois DG d'une catégorie ordonnée réduite.

    Par paires d'écart croissant : les générateurs fermés complètent l'image
    des décomposables en cohomologie, les générateurs non fermés sont des
    primitives des cocycles décomposables devenus exacts. Les relations sont
    les générateurs minimaux du noyau de l'évaluation des chemins.
    """
    if not c.ordered or not c.reduced:
        raise InputError("l'extraction demande une categorie ordonnee et reduite")
    names = [str(o) for o in c.objects]
    arrows = {}
    arrow_list = []
    differential = {}
    paths = {}
    counter = {"closed": 0, "primitive": 0}

    def new_arrow(i, j, degree, element, closed):
        kind = "closed" if closed else "primitive"
        counter[kind] += 1
        name = f"g{counter['closed']}" if closed else f"h{counter['primitive']}"
        arrows[name] = (i, j, element)
        arrow_list.append(Arrow(name, names[i], names[j], degree))
        paths.setdefault((i, j), []).append((name,))
        return name

    n = c.size
    for gap in range(1, n):
        for i in range(n - gap):
            j = i + gap
            decomposables = []
            for m in range(i + 1, j):
                for p in paths.get((i, m), []):
                    for q_ in paths.get((m, j), []):
                        if len(q_) == 1:
                            decomposables.append(q_ + p)
            evaluated = {}
            for p in decomposables:
                _, _, e = _path_element(c, arrows, p)
                evaluated.setdefault(_path_degree(c, arrows, p), []).append((p, e))
            paths.setdefault((i, j), []).extend(decomposables)
            cx = c.complex(i, j)
            degrees = sorted(set(cx.degrees()) | set(evaluated))
            for k in degrees:
                dim_k = cx.space.dim(k)
                if dim_k == 0:
                    continue
                dec = local_vectors(c, i, j, k, [e for _, e in evaluated.get(k, [])])
                dec_prev = local_vectors(c, i, j, k - 1, [e for _, e in evaluated.get(k - 1, [])])
                d_k = cx.d(k)
                cycles = kernel_basis(d_k) if d_k.rows else [unit_vector(dim_k, t) for t in range(dim_k)]
                boundaries = cx.d(k - 1).columns() if cx.space.dim(k - 1) else []
                dec_cycles = intersection_basis(dec, cycles, dim_k) if dec else []
                dec_boundaries = [cx.d(k - 1).apply(v) for v in dec_prev] if dec_prev else []
                # Générateurs fermés.
                known = dec_cycles + boundaries
                standard_cycles = [unit_vector(dim_k, t) for t in range(dim_k)
                                   if d_k.rows == 0 or all(x == 0 for x in d_k.column(t))]
                fresh = complement_basis(known, dim_k, prefer=standard_cycles + cycles)
                rank_known = len(independent_subset(known, dim_k)) if known else 0
                fresh = fresh[: len(cycles) - rank_known]
                offset = cx.space.offset(k)
                for v in fresh:
                    new_arrow(i, j, k, {offset + t: x for t, x in enumerate(v) if x}, closed=True)
                # Générateurs primitives : cocycles décomposables devenus exacts.
                exact_dec = intersection_basis(dec_cycles, boundaries, dim_k) if dec_cycles and boundaries else []
                targets = complement_basis(dec_boundaries, dim_k, prefer=exact_dec) if exact_dec else []
                rank_db = len(independent_subset(dec_boundaries, dim_k)) if dec_boundaries else 0
                targets = targets[: len(exact_dec) - rank_db]
                for target in targets:
                    w = solve(cx.d(k - 1), target)
                    prev_offset = cx.space.offset(k - 1)
                    name = new_arrow(i, j, k - 1, {prev_offset + t: x for t, x in enumerate(w) if x}, closed=False)
                    coeffs = solve(Matrix.from_columns(dec, dim_k), target)
                    combo = {}
                    for (p, _), x in zip(evaluated[k], coeffs):
                        if x:
                            add_into(combo, {p: x})
                    differential[name] = combo

    relations = _relations(c, arrows, paths)
    quiver = DGQuiver(tuple(names), tuple(arrow_list), differential, relations, name=f"{c.name}_presentation")
    logger.info("presentation_extracted", category=c.name, arrows=len(arrow_list), relations=len(relations))
    return Presentation(quiver, arrows)


def _path_degree(c: DGCategory, arrows: dict, path: tuple) -> int:
    total = 0
    for name in path:
        i, j, e = arrows[name]
        total += c.element_degree(i, j, e)
    return total


def _relations(c: DGCategory, arrows: dict, paths: dict) -> list:
    """Générateurs minimaux, paire par paire, du noyau de l'évaluation des chemins."""
    relations = []
    found = []
    n = c.size
    for gap in range(1, n):
        for i in range(n - gap):
            j = i + gap
            by_degree = {}
            for p in paths.get((i, j), []):
                by_degree.setdefault(_path_degree(c, arrows, p), []).append(p)
            for k, plist in sorted(by_degree.items()):
                plist = sorted(plist, key=lambda p: (-len(p), p))
                column = {p: t for t, p in enumerate(plist)}
                dim_k = c.space(i, j).dim(k)
                values = local_vectors(c, i, j, k, [_path_element(c, arrows, p)[2] for p in plist]) if dim_k else []
                kernel = kernel_basis(Matrix.from_columns(values, dim_k)) if dim_k else [
                    unit_vector(len(plist), t) for t in range(len(plist))
                ]
                if not kernel:
                    continue
                generated = []
                for (x, y, kr, rel) in found:
                    for v in [()] + [p for p in paths.get((i, x), [])]:
                        for u in [()] + [p for p in paths.get((y, j), [])]:
                            if (not v and x != i) or (not u and y != j):
                                continue
                            if not u and not v:
                                continue
                            if _degree_of(c, arrows, u) + _degree_of(c, arrows, v) + kr != k:
                                continue
                            vec = [Fraction(0)] * len(plist)
                            for p, coeff in rel.items():
                                vec[column[u + p + v]] += coeff
                            generated.append(tuple(vec))
                new = complement_basis(generated, len(plist), prefer=kernel) if generated else list(kernel)
                rank_generated = len(independent_subset(generated, len(plist))) if generated else 0
                new = new[: len(kernel) - rank_generated]
                for vec in new:
                    rel = {plist[t]: x for t, x in enumerate(vec) if x}
                    found.append((i, j, k, rel))
                    relations.append(rel)
    return relations


def _degree_of(c: DGCategory, arrows: dict, path: tuple) -> int:
    return _path_degree(c, arrows, path) if path else 0
