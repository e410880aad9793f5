"""
Complexes tordus unilatéraux sur une catégorie DG.

Fonctionnalités :
- Complexes tordus (termes décalés, torsion q strictement triangulaire supérieure)
- Complexes de morphismes tordus et leur différentielle
- Décalage, cône, convolution Tot, produit par un complexe d'espaces vectoriels
- Vérification de l'équation de Maurer-Cartan ∂q + q² = 0
- Sous-catégorie DG pleine engendrée par des complexes tordus

Un morphisme de degré l de C_i[r_i] vers D_j[s_j] est stocké par son élément
sous-jacent de degré l + s_j - r_i ; la composition des éléments sous-jacents
est sans signe et la différentielle d'un morphisme vers D_j[s_j] est
(-1)^(s_j) fois la différentielle sous-jacente.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import structlog
from tqdm import tqdm

from src.algebra.cochain import CochainComplex, GradedVS, cohomology_dims, koszul
from src.algebra.exactla import Matrix
from src.algebra.sparse import add_into
from src.categories.dgcore import DGCategory, rebase_units
from src.errors import MathematicalError, Report, StructureError

logger = structlog.get_logger()


class Term(NamedTuple):
    obj: int
    shift: int = 0


@dataclass(eq=False)
class TwistedComplex:
    base: DGCategory
    terms: tuple
    q: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.terms = tuple(Term(*t) for t in self.terms)
        clean = {}
        for (i, j), element in self.q.items():
            if not element:
                continue
            if not 0 <= i < j < len(self.terms):
                raise StructureError(f"torsion q[{i}][{j}] hors de la partie strictement superieure")
            expected = 1 + self.terms[j].shift - self.terms[i].shift
            actual = self.base.element_degree(self.terms[i].obj, self.terms[j].obj, element)
            if actual != expected:
                raise StructureError(f"torsion q[{i}][{j}] de degre sous-jacent {actual}, attendu {expected}")
            clean[(i, j)] = dict(element)
        self.q = clean

    def __len__(self) -> int:
        return len(self.terms)

    def describe(self) -> str:
        if self.name:
            return self.name
        parts = []
        for t in self.terms:
            obj = self.base.objects[t.obj]
            parts.append(f"{obj}[{t.shift}]" if t.shift else str(obj))
        return "(" + " + ".join(parts) + ")" if len(parts) != 1 else parts[0]


@dataclass(eq=False)
class TwistedMorphism:
    source: TwistedComplex
    target: TwistedComplex
    degree: int
    entries: dict = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def scaled(self, coeff) -> "TwistedMorphism":
        entries = {}
        for key, e in self.entries.items():
            value = add_into({}, e, coeff)
            if value:
                entries[key] = value
        return TwistedMorphism(self.source, self.target, self.degree, entries)


def _add_entry(entries: dict, key: tuple, element: dict, coeff=1) -> None:
    current = add_into(entries.setdefault(key, {}), element, coeff)
    if not current:
        entries.pop(key, None)


def _check_same_base(a: TwistedComplex, b: TwistedComplex) -> None:
    if a.base is not b.base:
        raise StructureError("complexes tordus sur des categories de base differentes")


# ==================== Algèbre des morphismes ====================

def compose_tw(g: TwistedMorphism, f: TwistedMorphism) -> TwistedMorphism:
    """(g∘f)[i][k] = Σ_j g[j][k] ∘ f[i][j]."""
    if f.target is not g.source:
        raise StructureError("morphismes tordus non composables")
    base = f.source.base
    entries = {}
    for (i, j), fe in f.entries.items():
        for (j2, k), ge in g.entries.items():
            if j2 != j:
                continue
            value = base.compose(f.source.terms[i].obj, f.target.terms[j].obj, g.target.terms[k].obj, ge, fe)
            if value:
                _add_entry(entries, (i, k), value)
    return TwistedMorphism(f.source, g.target, f.degree + g.degree, entries)


def differential(f: TwistedMorphism) -> TwistedMorphism:
    """∂f = (±∂f_ij) + q'f - (-1)^|f| f q."""
    a, b = f.source, f.target
    base = a.base
    entries = {}
    for (i, j), e in f.entries.items():
        oi, oj = a.terms[i].obj, b.terms[j].obj
        inner = base.d(oi, oj, e)
        if inner:
            _add_entry(entries, (i, j), inner, koszul(b.terms[j].shift))
        for (j2, k), q in b.q.items():
            if j2 == j:
                value = base.compose(oi, oj, b.terms[k].obj, q, e)
                if value:
                    _add_entry(entries, (i, k), value)
        for (h, i2), q in a.q.items():
            if i2 == i:
                value = base.compose(a.terms[h].obj, oi, oj, e, q)
                if value:
                    _add_entry(entries, (h, j), value, -koszul(f.degree))
    return TwistedMorphism(a, b, f.degree + 1, entries)


def identity(c: TwistedComplex) -> TwistedMorphism:
    entries = {(i, i): c.base.unit(t.obj) for i, t in enumerate(c.terms)}
    return TwistedMorphism(c, c, 0, {k: v for k, v in entries.items() if v})


def check_mc(c: TwistedComplex) -> Report:
    """Vérifie ∂q + q² = 0 coefficient par coefficient."""
    report = Report("Maurer-Cartan")
    base = c.base
    n = len(c.terms)
    for i in range(n):
        for k in range(i + 1, n):
            oi, ok = c.terms[i].obj, c.terms[k].obj
            residue = {}
            if (i, k) in c.q:
                add_into(residue, base.d(oi, ok, c.q[(i, k)]), koszul(c.terms[k].shift))
            for j in range(i + 1, k):
                if (i, j) in c.q and (j, k) in c.q:
                    add_into(residue, base.compose(oi, c.terms[j].obj, ok, c.q[(j, k)], c.q[(i, j)]))
            report.checked += 1
            if residue:
                report.fail(entry=(i, k), residue={base.label(oi, ok, a): str(x) for a, x in sorted(residue.items())})
    return report


def _require_mc(c: TwistedComplex, what: str) -> None:
    report = check_mc(c)
    if not report.ok:
        raise MathematicalError(f"{what} : equation de Maurer-Cartan violee", witness=report.failures[0])


# ==================== Complexes de morphismes ====================

@dataclass(eq=False)
class TwistedHom:
    source: TwistedComplex
    target: TwistedComplex
    basis: tuple
    index: dict
    complex: CochainComplex

    def entry_degree(self, i: int, j: int, a: int) -> int:
        base = self.source.base
        return base.degree(self.source.terms[i].obj, self.target.terms[j].obj, a) \
            + self.source.terms[i].shift - self.target.terms[j].shift

    def element(self, f: TwistedMorphism) -> dict:
        """Morphisme tordu -> élément creux à plat du complexe."""
        result = {}
        for (i, j), e in f.entries.items():
            for a, x in e.items():
                add_into(result, {self.index[(i, j, a)]: Fraction(1)}, x)
        return result

    def morphism(self, element: dict, degree: Optional[int] = None) -> TwistedMorphism:
        entries = {}
        for flat, x in element.items():
            i, j, a = self.basis[flat]
            degree_here = self.entry_degree(i, j, a)
            if degree is None:
                degree = degree_here
            elif degree != degree_here:
                raise StructureError("element inhomogene d'un complexe de morphismes tordus")
            _add_entry(entries, (i, j), {a: x})
        if degree is None:
            raise StructureError("degre d'un morphisme nul non precise")
        return TwistedMorphism(self.source, self.target, degree, entries)

    def basis_morphism(self, flat: int) -> TwistedMorphism:
        return self.morphism({flat: Fraction(1)})

    def cohomology(self) -> dict:
        return cohomology_dims(self.complex)


def twisted_hom(a: TwistedComplex, b: TwistedComplex) -> TwistedHom:
    """Complexe des morphismes tordus de `a` vers `b`."""
    _check_same_base(a, b)
    base = a.base
    entries = []
    for i, s in enumerate(a.terms):
        for j, t in enumerate(b.terms):
            for x in base.basis(s.obj, t.obj):
                entries.append((base.degree(s.obj, t.obj, x) + s.shift - t.shift, i, j, x))
    entries.sort()
    components, positions = {}, {}
    for degree, i, j, x in entries:
        labels = components.setdefault(degree, [])
        positions[(i, j, x)] = (degree, len(labels))
        labels.append(f"{base.label(a.terms[i].obj, b.terms[j].obj, x)}[{i},{j}]")
    space = GradedVS(components)
    basis = [None] * space.total_dim
    index = {}
    for key, (degree, pos) in positions.items():
        flat = space.flat(degree, pos)
        basis[flat] = key
        index[key] = flat
    shell = TwistedHom(a, b, tuple(basis), index, CochainComplex(space))

    doks = {}
    for flat, (i, j, x) in enumerate(basis):
        degree, col = space.locate(flat)
        image = shell.element(differential(shell.basis_morphism(flat)))
        for target, value in image.items():
            _, row = space.locate(target)
            doks.setdefault(degree, {})[(row, col)] = value
    matrices = {k: Matrix.from_sparse(space.dim(k + 1), space.dim(k), dok) for k, dok in doks.items()}
    shell.complex = CochainComplex(space, matrices)
    return shell


# ==================== Constructions ====================

def embed(c: DGCategory, obj) -> TwistedComplex:
    index = c.index(obj)
    return TwistedComplex(c, (Term(index, 0),), {}, name=str(c.objects[index]))


def shift_tw(c: TwistedComplex, n: int) -> TwistedComplex:
    """C[n] : décalages r_i + n, torsion multipliée par (-1)^n."""
    sign = koszul(n)
    q = {key: add_into({}, e, sign) for key, e in c.q.items()}
    name = f"{c.name}[{n}]" if c.name and n else c.name
    return TwistedComplex(c.base, tuple(Term(t.obj, t.shift + n) for t in c.terms), q, name=name)


def _require_closed(f: TwistedMorphism, what: str) -> None:
    if f.degree != 0:
        raise MathematicalError(f"{what} : morphisme de degre {f.degree}, attendu 0", witness={"degree": f.degree})
    residue = differential(f)
    if not residue.is_zero():
        raise MathematicalError(f"{what} : morphisme non ferme", witness={"entries": sorted(residue.entries)})


def cone(f: TwistedMorphism, name: str = "") -> TwistedComplex:
    """C(f) = (C[1] ⊕ D, [[-q_C, f], [0, q_D]]) pour f : C -> D fermé de degré 0."""
    _require_closed(f, "cone")
    c, d = f.source, f.target
    n = len(c.terms)
    shifted = shift_tw(c, 1)
    q = dict(shifted.q)
    for (i, j), e in d.q.items():
        q[(n + i, n + j)] = e
    for (i, j), e in f.entries.items():
        q[(i, n + j)] = e
    result = TwistedComplex(c.base, shifted.terms + d.terms, q, name=name or f"C({c.describe()}->{d.describe()})")
    logger.debug("cone_built", source=c.describe(), target=d.describe(), terms=len(result.terms))
    return result


def cone_maps(f: TwistedMorphism, cone_complex: Optional[TwistedComplex] = None) -> dict:
    """
    Morphismes canoniques du cône, tous de degré 0.

    i : C[1] -> C(f), p : C(f) -> C[1], j : D -> C(f), s : C(f) -> D.
    """
    cf = cone_complex or cone(f)
    shifted = TwistedComplex(cf.base, cf.terms[: len(f.source.terms)], {k: v for k, v in cf.q.items() if k[1] < len(f.source.terms)})
    d = f.target
    n = len(shifted.terms)
    base = cf.base
    i_entries = {(t, t): base.unit(term.obj) for t, term in enumerate(shifted.terms)}
    j_entries = {(t, n + t): base.unit(term.obj) for t, term in enumerate(d.terms)}
    p_entries = {(t, t): base.unit(term.obj) for t, term in enumerate(shifted.terms)}
    s_entries = {(n + t, t): base.unit(term.obj) for t, term in enumerate(d.terms)}
    return {
        "i": TwistedMorphism(shifted, cf, 0, i_entries),
        "p": TwistedMorphism(cf, shifted, 0, p_entries),
        "j": TwistedMorphism(d, cf, 0, j_entries),
        "s": TwistedMorphism(cf, d, 0, s_entries),
        "source_shifted": shifted,
    }


def _same(f: TwistedMorphism, g: TwistedMorphism) -> bool:
    keys = set(f.entries) | set(g.entries)
    return all(f.entries.get(k, {}) == g.entries.get(k, {}) for k in keys)


def check_cone(f: TwistedMorphism) -> Report:
    """Vérifie pi = 1, sj = 1, si = 0, pj = 0, ip + js = 1 et MC pour le cône."""
    cf = cone(f)
    maps = cone_maps(f, cf)
    report = check_mc(cf)
    report.name = "cone"
    i, p, j, s = maps["i"], maps["p"], maps["j"], maps["s"]
    ip_js = compose_tw(i, p)
    for key, e in compose_tw(j, s).entries.items():
        _add_entry(ip_js.entries, key, e)
    checks = {
        "pi=1": _same(compose_tw(p, i), identity(maps["source_shifted"])),
        "sj=1": _same(compose_tw(s, j), identity(f.target)),
        "si=0": compose_tw(s, i).is_zero(),
        "pj=0": compose_tw(p, j).is_zero(),
        "ip+js=1": _same(ip_js, identity(cf)),
        "p closed": differential(p).is_zero(),
        "j closed": differential(j).is_zero(),
    }
    for name, ok in checks.items():
        report.checked += 1
        if not ok:
            report.fail(identity=name)
    return report


@dataclass(eq=False)
class NestedComplex:
    """
    Complexe tordu de complexes tordus.

    `outer` liste des couples (complexe, décalage r_i) ; `twist[(i, j)]` est un
    morphisme tordu de degré 1 de shift_tw(D^i, r_i) vers shift_tw(D^j, r_j).
    """

    outer: tuple
    twist: dict = field(default_factory=dict)

    def shifted(self, i: int) -> TwistedComplex:
        inner, r = self.outer[i]
        return shift_tw(inner, r)


def tot(nested: NestedComplex, name: str = "", check: bool = True) -> TwistedComplex:
    """Convolution : termes D^i_j[r^i_j + r_i], torsion (-1)^(r_i) q^i + q_outer."""
    if not nested.outer:
        raise StructureError("convolution d'un complexe vide : base inconnue")
    base = nested.outer[0][0].base
    blocks = [nested.shifted(i) for i in range(len(nested.outer))]
    for block in blocks:
        if block.base is not base:
            raise StructureError("convolution sur des categories de base differentes")
        if check:
            _require_mc(block, "convolution (complexe interieur)")
    offsets, terms, q = [], [], {}
    for block in blocks:
        offset = len(terms)
        offsets.append(offset)
        terms.extend(block.terms)
        for (i, j), e in block.q.items():
            q[(offset + i, offset + j)] = e
    for (a, b), morphism in nested.twist.items():
        if a >= b:
            raise StructureError(f"torsion exterieure ({a}, {b}) non strictement superieure")
        if morphism.degree != 1:
            raise StructureError(f"torsion exterieure ({a}, {b}) de degre {morphism.degree}")
        for (i, j), e in morphism.entries.items():
            if e:
                q[(offsets[a] + i, offsets[b] + j)] = e
    result = TwistedComplex(base, tuple(terms), q, name=name)
    if check:
        _require_mc(result, "convolution")
    return result


def as_nested_cone(f: TwistedMorphism) -> NestedComplex:
    """Le cône vu comme complexe à deux termes (C[1], D)."""
    _require_closed(f, "cone")
    shifted = shift_tw(f.source, 1)
    twist = TwistedMorphism(shifted, f.target, 1, dict(f.entries))
    return NestedComplex(((f.source, 1), (f.target, 0)), {(0, 1): twist})


def tensor_nested(c: TwistedComplex, v: CochainComplex) -> NestedComplex:
    """C ⊗ V : une couche C[-k] par vecteur de base de V^k, torsions ∂^k ⊗ id."""
    outer, degree_of = [], []
    for k in v.degrees():
        for _ in range(v.space.dim(k)):
            outer.append((c, -k))
            degree_of.append(k)
    twist = {}
    for k in v.degrees():
        d = v.d(k)
        src, tgt = v.space.offset(k), v.space.offset(k + 1)
        for (row, col), x in d.to_dok().items():
            a, b = src + col, tgt + row
            layer_a, layer_b = shift_tw(c, -k), shift_tw(c, -k - 1)
            entries = {(t, t): add_into({}, c.base.unit(term.obj), x) for t, term in enumerate(c.terms)}
            twist[(a, b)] = TwistedMorphism(layer_a, layer_b, 1, {key: e for key, e in entries.items() if e})
    return NestedComplex(tuple(outer), twist)


def tensor_with_complex(c: TwistedComplex, v: CochainComplex, name: str = "") -> TwistedComplex:
    if v.space.total_dim == 0:
        return TwistedComplex(c.base, (), {}, name=name or "0")
    return tot(tensor_nested(c, v), name=name or f"{c.describe()}⊗V")


# ==================== Sous-catégorie pleine ====================

def full_subcategory(complexes, names=None, name: str = "", show_progress: bool = False) -> DGCategory:
    """
    Catégorie DG dont les objets sont les complexes tordus donnés.

    Les bases des espaces de morphismes sont celles de `twisted_hom`, puis
    rebasées pour que chaque identité soit un vecteur de base.
    """
    complexes = list(complexes)
    if not complexes:
        raise StructureError("sous-categorie pleine vide")
    for c in complexes[1:]:
        _check_same_base(complexes[0], c)
    names = tuple(names or [c.describe() for c in complexes])
    n = len(complexes)
    base = complexes[0].base
    pairs = [(x, y) for x in range(n) for y in range(n)]
    iterator = tqdm(pairs, desc="Morphismes tordus", unit="paire") if show_progress else pairs
    homs = {(x, y): twisted_hom(complexes[x], complexes[y]) for (x, y) in iterator}

    table = {}
    for x in range(n):
        for y in range(n):
            first = homs[(x, y)]
            if not first.basis:
                continue
            for z in range(n):
                second, result = homs[(y, z)], homs[(x, z)]
                if not second.basis:
                    continue
                entries = {}
                for fa, (i, j, a) in enumerate(first.basis):
                    for fb, (j2, k, b) in enumerate(second.basis):
                        if j2 != j:
                            continue
                        value = base.compose_basis(
                            complexes[x].terms[i].obj, complexes[y].terms[j].obj, complexes[z].terms[k].obj, b, a
                        )
                        if value:
                            entries[(fb, fa)] = {result.index[(i, k, e)]: v for e, v in value.items()}
                table[(x, y, z)] = entries
    units = {x: homs[(x, x)].element(identity(complexes[x])) for x in range(n)}
    hom = {pair: h.complex for pair, h in homs.items() if h.basis}
    raw = DGCategory(names, hom, table, units, name=name or "pretr")
    result = rebase_units(raw, name=raw.name)
    logger.info("full_subcategory_built", objects=n, total_dim=sum(result.dim(i, j) for (i, j) in result.pairs()))
    return result
