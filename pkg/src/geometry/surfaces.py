"""
Réseaux de Picard des surfaces rationnelles.

Fonctionnalités :
- Forme d'intersection entière et classe canonique
- Caractéristique d'Euler par Riemann-Roch : χ(D) = 1 + D·(D - K)/2
- Accouplement d'Euler d'une catégorie DG (somme alternée des cohomologies)
- Augmentation des collections de fibrés en droites
- Changements de jauge des carquois (substitutions de flèches)
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

import structlog
from sympy import Integer, Symbol, expand
from sympy.parsing.sympy_parser import implicit_multiplication, parse_expr, standard_transformations

from src.categories.dgcore import DGCategory
from src.categories.quiver import DGQuiver, apply_gauge
from src.errors import InputError

logger = structlog.get_logger()

TRANSFORMATIONS = standard_transformations + (implicit_multiplication,)
VERTEX_PATTERN = re.compile(r"^O(?:\((?P<divisor>.*)\))?$")
# "2E2" : le tokeniseur lirait le flottant 2e2, on force 2*E2.
COEFFICIENT_PATTERN = re.compile(r"(?<![A-Za-z_\d])(\d+)\s*(?=[A-Za-z_])")


@dataclass(frozen=True)
class PicardLattice:
    generators: tuple
    form: tuple
    canonical: tuple

    def __post_init__(self):
        n = len(self.generators)
        object.__setattr__(self, "form", tuple(tuple(int(x) for x in row) for row in self.form))
        object.__setattr__(self, "canonical", tuple(int(x) for x in self.canonical))
        if len(self.form) != n or any(len(row) != n for row in self.form):
            raise InputError(f"forme d'intersection de taille incorrecte (attendu {n}x{n})")
        if any(self.form[i][j] != self.form[j][i] for i in range(n) for j in range(n)):
            raise InputError("forme d'intersection non symetrique")
        if len(self.canonical) != n:
            raise InputError("classe canonique de longueur incorrecte")

    @classmethod
    def from_dict(cls, data: dict) -> "PicardLattice":
        try:
            generators, form = tuple(data["generators"]), data["form"]
        except KeyError as e:
            raise InputError(f"reseau de Picard : cle manquante {e}") from None
        lattice = cls(generators, form, (0,) * len(generators))
        canonical = data.get("canonical", lattice.zero())
        if isinstance(canonical, str):
            canonical = parse_divisor(lattice, canonical)
        return cls(lattice.generators, lattice.form, canonical)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "form": [list(row) for row in self.form],
            "canonical": format_divisor(self, self.canonical),
        }

    def dot(self, a, b) -> int:
        n = len(self.generators)
        return sum(a[i] * self.form[i][j] * b[j] for i in range(n) for j in range(n))

    def zero(self) -> tuple:
        return (0,) * len(self.generators)


def parse_divisor(lattice: PicardLattice, text: str) -> tuple:
    """Analyse "H-E2", "2H", "-3H+E1+2E2" ou "0" en coordonnées entières."""
    symbols = {name: Symbol(name) for name in lattice.generators}
    try:
        expr = parse_expr(COEFFICIENT_PATTERN.sub(r"\1*", text), local_dict=symbols, transformations=TRANSFORMATIONS, evaluate=True)
    except Exception as e:
        raise InputError(f"diviseur illisible : {text!r} ({e})") from None
    unknown = {str(s) for s in expr.free_symbols} - set(lattice.generators)
    if unknown:
        raise InputError(f"diviseur {text!r} : generateurs inconnus {sorted(unknown)}")
    coords = []
    for name in lattice.generators:
        coeff = expr.coeff(symbols[name])
        if not coeff.is_Integer:
            raise InputError(f"diviseur {text!r} : coefficient non entier devant {name}")
        coords.append(int(coeff))
    linear = sum((coeff * symbols[name] for coeff, name in zip(coords, lattice.generators)), Integer(0))
    if expand(expr - linear) != 0:
        raise InputError(f"diviseur {text!r} non lineaire")
    return tuple(coords)


def format_divisor(lattice: PicardLattice, coords) -> str:
    parts = []
    for name, x in zip(lattice.generators, coords):
        if not x:
            continue
        magnitude = "" if abs(x) == 1 else str(abs(x))
        parts.append(("-" if x < 0 else "+") + magnitude + name)
    if not parts:
        return "0"
    return "".join(parts).lstrip("+")


def vertex_divisor(lattice: PicardLattice, vertex: str) -> tuple:
    """"O" -> 0, "O(E1+E2)" -> E1 + E2."""
    match = VERTEX_PATTERN.match(vertex)
    if not match:
        raise InputError(f"sommet {vertex!r} : fibre en droites O(D) attendu")
    text = match.group("divisor")
    return parse_divisor(lattice, text) if text else lattice.zero()


def chi(lattice: PicardLattice, d) -> int:
    """
    Riemann-Roch : χ(O(D)) = 1 + D·(D - K)/2.

    Raises:
        InputError: D·(D - K) impair (réseau incohérent)
    """
    difference = tuple(x - k for x, k in zip(d, lattice.canonical))
    value = lattice.dot(d, difference)
    if value % 2:
        raise InputError(f"D.(D-K) = {value} impair pour D = {format_divisor(lattice, d)}")
    return 1 + value // 2


def chi_pair(lattice: PicardLattice, a, b) -> int:
    """χ(O(A), O(B)) = χ(B - A)."""
    return chi(lattice, tuple(y - x for x, y in zip(a, b)))


def euler_pairing(c: DGCategory, i: int, j: int) -> int:
    return sum((-1) ** (k % 2) * h for k, h in c.cohomology(i, j).items())


def riemann_roch_report(lattice: PicardLattice, c: DGCategory) -> list:
    """Lignes (source, but, χ Riemann-Roch, accouplement d'Euler) pour toutes les paires."""
    divisors = [vertex_divisor(lattice, name) for name in c.objects]
    rows = []
    for i, a in enumerate(divisors):
        for j, b in enumerate(divisors):
            rows.append((c.objects[i], c.objects[j], chi_pair(lattice, a, b), euler_pairing(c, i, j)))
    return rows


# ==================== Augmentations ====================

def augment_collection(lattice: PicardLattice, classes: list, r, k: int) -> list:
    """
    ⟨L_1, ..., L_s⟩ -> ⟨L_1(R), ..., L_(k-1)(R), L_k, L_k(R), L_(k+1), ..., L_s⟩.

    Raises:
        InputError: k hors de [1, s]
    """
    s = len(classes)
    if not 1 <= k <= s:
        raise InputError(f"position d'augmentation {k} hors de [1, {s}]")

    def twist(d):
        return tuple(x + y for x, y in zip(d, r))

    result = [twist(d) for d in classes[: k - 1]]
    result.append(tuple(classes[k - 1]))
    result.append(twist(classes[k - 1]))
    result.extend(tuple(d) for d in classes[k:])
    logger.debug("collection_augmented", twist=format_divisor(lattice, r), slot=k, length=len(result))
    return result


def augment_chain(lattice: PicardLattice, base: list, steps: list) -> list:
    """Applique successivement des étapes (R, k) ; R peut être une chaîne."""
    classes = [tuple(d) for d in base]
    for r, k in steps:
        if isinstance(r, str):
            r = parse_divisor(lattice, r)
        classes = augment_collection(lattice, classes, r, k)
    return classes


# ==================== Jauge ====================

@dataclass
class GaugeChange:
    """Substitution inversible flèche -> flèche + combinaison de chemins parallèles."""

    substitution: dict = field(default_factory=dict)
    name: str = ""

    @classmethod
    def shear(cls, arrow: str, terms: dict, name: str = "") -> "GaugeChange":
        """arrow -> arrow + Σ coeff·chemin, les chemins étant des tuples de noms."""
        combo = {(arrow,): Fraction(1)}
        for path, x in terms.items():
            if arrow in path:
                raise InputError(f"jauge non inversible : {arrow} apparait dans {path}")
            combo[tuple(path)] = combo.get(tuple(path), 0) + Fraction(x)
        return cls({arrow: {p: x for p, x in combo.items() if x}}, name or f"{arrow}_shear")

    def apply(self, q: DGQuiver) -> DGQuiver:
        return apply_gauge(q, self.substitution, name=f"{q.name}_{self.name}" if self.name else "")


def apply_gauges(q: DGQuiver, changes: list) -> DGQuiver:
    for change in changes:
        q = change.apply(q)
    return q
