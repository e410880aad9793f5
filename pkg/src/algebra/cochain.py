"""
Espaces vectoriels gradués et complexes de cochaînes (différentielle de degré +1).

Fonctionnalités :
- Vérification d² = 0 et dimensions de cohomologie
- Scindage (ι, π, h) : C = B ⊕ H̃ ⊕ L, avec h inverse de d sur B
- Décalage, dual (règle de Koszul), produit tensoriel
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import structlog

from src.algebra.exactla import (
    Matrix,
    complement_basis,
    kernel_basis,
    image_basis,
    unit_vector,
)
from src.errors import Report, StructureError

logger = structlog.get_logger()


def koszul(*degrees) -> int:
    """(-1)^(produit des degrés), réduit à ±1 ; vaut 1 sans degré."""
    if not degrees:
        return 1
    parity = 1
    for d in degrees:
        parity = (parity * d) % 2
    return -1 if parity else 1


@dataclass(frozen=True)
class GradedVS:
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for degree, labels in sorted(self.components.items()):
            labels = tuple(labels)
            if len(set(labels)) != len(labels):
                raise StructureError(f"etiquettes dupliquees en degre {degree}")
            if labels:
                clean[int(degree)] = labels
        object.__setattr__(self, "components", clean)

    def degrees(self) -> list:
        return sorted(self.components)

    def dim(self, degree: int) -> int:
        return len(self.components.get(degree, ()))

    def dims(self) -> dict:
        return {k: len(v) for k, v in self.components.items()}

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.components.values())

    def labels(self, degree: int) -> tuple:
        return self.components.get(degree, ())

    # Indexation à plat : degrés croissants, puis ordre des étiquettes.
    def offset(self, degree: int) -> int:
        return sum(len(v) for k, v in self.components.items() if k < degree)

    def flat(self, degree: int, index: int) -> int:
        return self.offset(degree) + index

    def locate(self, flat_index: int) -> tuple:
        for degree in self.degrees():
            n = len(self.components[degree])
            if flat_index < n:
                return degree, flat_index
            flat_index -= n
        raise IndexError(flat_index)

    def degree_of(self, flat_index: int) -> int:
        return self.locate(flat_index)[0]

    def label(self, flat_index: int) -> str:
        degree, i = self.locate(flat_index)
        return self.components[degree][i]

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * len(v) for k, v in self.components.items())


@dataclass(frozen=True)
class CochainComplex:
    space: GradedVS
    differential: dict = field(default_factory=dict)

    def d(self, degree: int) -> Matrix:
        """Matrice de d : C^degree -> C^(degree+1)."""
        m = self.differential.get(degree)
        if m is None:
            return Matrix.zeros(self.space.dim(degree + 1), self.space.dim(degree))
        return m

    def dims(self) -> dict:
        return self.space.dims()

    def degrees(self) -> list:
        return self.space.degrees()

    def apply_d(self, degree: int, v) -> tuple:
        return self.d(degree).apply(v)

    def flat_differential(self) -> Matrix:
        """d comme endomorphisme de l'espace total (indexation à plat)."""
        n = self.space.total_dim
        dok = {}
        for k in self.degrees():
            m = self.d(k)
            src, tgt = self.space.offset(k), self.space.offset(k + 1)
            for (i, j), x in m.to_dok().items():
                dok[(tgt + i, src + j)] = x
        return Matrix.from_sparse(n, n, dok)


def check_shapes(c: CochainComplex) -> None:
    for k, m in c.differential.items():
        expected = (c.space.dim(k + 1), c.space.dim(k))
        if m.shape != expected:
            raise StructureError(f"differentielle en degre {k} de forme {m.shape}, attendu {expected}")


def check_complex(c: CochainComplex) -> Report:
    """Vérifie d_{k+1} ∘ d_k = 0 en chaque degré."""
    check_shapes(c)
    report = Report("complexe")
    for k in c.degrees():
        if c.space.dim(k + 1) == 0 or c.space.dim(k + 2) == 0:
            continue
        product = c.d(k + 1) @ c.d(k)
        report.checked += 1
        if not product.is_zero():
            report.fail(degree=k, product=[list(map(str, product.row(i))) for i in range(product.rows)])
    return report


def _rank(m: Matrix) -> int:
    return len(image_basis(m)) if m.rows and m.cols else 0


def cohomology_dims(c: CochainComplex) -> dict:
    """Dimensions non nulles H^k = dim ker d_k - rang d_{k-1}."""
    report = check_complex(c)
    if not report.ok:
        raise StructureError(f"d^2 != 0 en degre {report.failures[0]['degree']}")
    dims = {}
    for k in c.degrees():
        h = c.space.dim(k) - _rank(c.d(k)) - _rank(c.d(k - 1))
        if h:
            dims[k] = h
    return dims


# ==================== Scindage ====================

@dataclass
class Splitting:
    """
    Données (ι, π, h) par degré.

    iota[k] : H^k -> C^k, pi[k] : C^k -> H^k, h[k] : C^k -> C^(k-1).
    """

    complex: CochainComplex
    representatives: dict
    iota: dict
    pi: dict
    h: dict

    def h_dim(self, degree: int) -> int:
        return len(self.representatives.get(degree, ()))

    def homotopy(self, degree: int) -> Matrix:
        m = self.h.get(degree)
        if m is None:
            return Matrix.zeros(self.complex.space.dim(degree - 1), self.complex.space.dim(degree))
        return m

    def check(self) -> Report:
        """Vérifie πι = 1, dh + hd = 1 - ιπ, h² = 0, hι = 0, πh = 0."""
        c = self.complex
        report = Report("scindage")
        for k in c.degrees():
            n = c.space.dim(k)
            iota, pi = self.iota[k], self.pi[k]
            checks = {
                "pi_iota": (pi @ iota) - Matrix.identity(iota.cols),
                "homotopy": (c.d(k - 1) @ self.homotopy(k)) + (self.homotopy(k + 1) @ c.d(k))
                - Matrix.identity(n) + (iota @ pi),
                "h_squared": self.homotopy(k - 1) @ self.homotopy(k),
                "h_iota": self.homotopy(k) @ iota,
                "pi_h": self.pi.get(k - 1, Matrix.zeros(0, c.space.dim(k - 1))) @ self.homotopy(k),
            }
            for name, residue in checks.items():
                report.checked += 1
                if not residue.is_zero():
                    report.fail(degree=k, identity=name)
        return report


def cohomology_basis(c: CochainComplex, strategy: str = "first") -> Splitting:
    """
    Scindage C^k = B^k ⊕ H̃^k ⊕ L^k.

    Les représentants privilégient les vecteurs de base qui sont des cocycles,
    ce qui garantit qu'une unité est son propre représentant. Le complément L
    des cocycles est choisi dans la base canonique, par ordre croissant
    (`strategy="first"`) ou décroissant (`strategy="last"`).

    Args:
        c: complexe vérifiant d² = 0
        strategy: ordre de préférence pour le complément L

    Returns:
        Splitting vérifiant les cinq identités
    """
    if strategy not in ("first", "last"):
        raise ValueError(f"strategie inconnue : {strategy}")
    report = check_complex(c)
    if not report.ok:
        raise StructureError(f"d^2 != 0 en degre {report.failures[0]['degree']}")

    representatives, iota, pi, h = {}, {}, {}, {}
    complements = {}
    degrees = c.degrees()
    for k in (range(degrees[0] - 1, degrees[-1] + 1) if degrees else []):
        n = c.space.dim(k)
        previous = complements.get(k - 1, [])
        boundaries = [c.d(k - 1).apply(l) for l in previous]
        if n == 0:
            complements[k] = []
            continue
        d_k = c.d(k)
        cycles = kernel_basis(d_k) if d_k.rows else [unit_vector(n, i) for i in range(n)]
        standard_cycles = [unit_vector(n, i) for i in range(n) if d_k.rows == 0 or all(x == 0 for x in d_k.column(i))]
        reps = complement_basis(boundaries, n, prefer=standard_cycles + cycles)
        reps = reps[: len(cycles) - len(boundaries)]
        order = range(n) if strategy == "first" else range(n - 1, -1, -1)
        rest = complement_basis(boundaries + reps, n, prefer=[unit_vector(n, i) for i in order])
        complements[k] = rest

        frame = Matrix.from_columns(boundaries + reps + rest, n)
        inverse = Matrix.from_domain(frame.to_domain().inv())
        r, s = len(boundaries), len(reps)
        coords_b = Matrix(r, n, inverse.entries[: r * n])
        representatives[k] = reps
        iota[k] = Matrix.from_columns(reps, n) if reps else Matrix.zeros(n, 0)
        pi[k] = Matrix(s, n, inverse.entries[r * n:(r + s) * n])
        if r:
            h[k] = Matrix.from_columns(previous, c.space.dim(k - 1)) @ coords_b
    logger.debug("splitting_built", degrees=degrees, h_dims={k: len(v) for k, v in representatives.items() if v})
    return Splitting(c, representatives, iota, pi, h)


# ==================== Constructions ====================

def shift(c: CochainComplex, n: int) -> CochainComplex:
    """C[n] : degré k -> k - n, différentielle multipliée par (-1)^n."""
    sign = koszul(n)
    space = GradedVS({k - n: labels for k, labels in c.space.components.items()})
    differential = {k - n: m.scale(sign) for k, m in c.differential.items()}
    return CochainComplex(space, differential)


def dual(c: CochainComplex) -> CochainComplex:
    """
    Dual gradué : (C*)^(-k) = (C^k)*, avec d*φ = -(-1)^|φ| φ∘d.
    """
    space = GradedVS({-k: tuple(f"{label}*" for label in labels) for k, labels in c.space.components.items()})
    differential = {}
    for k, m in c.differential.items():
        # d* : (C^(k+1))* -> (C^k)*, de degré -(k+1) vers -k.
        differential[-k - 1] = m.transpose().scale(koszul(k))
    return CochainComplex(space, differential)


def tensor(c1: CochainComplex, c2: CochainComplex) -> CochainComplex:
    """Produit tensoriel, d(a⊗b) = da⊗b + (-1)^|a| a⊗db."""
    index = {}
    components = {}
    for p in c1.degrees():
        for q in c2.degrees():
            labels = components.setdefault(p + q, [])
            for i, a in enumerate(c1.space.labels(p)):
                for j, b in enumerate(c2.space.labels(q)):
                    index[(p, i, q, j)] = (p + q, len(labels))
                    labels.append(f"{a}⊗{b}")
    space = GradedVS(components)
    doks = {}
    for (p, i, q, j), (n, col) in index.items():
        target = doks.setdefault(n, {})
        d1 = c1.d(p)
        for r in range(d1.rows):
            x = d1[r, i]
            if x:
                row = index[(p + 1, r, q, j)][1]
                target[(row, col)] = target.get((row, col), 0) + x
        d2 = c2.d(q)
        for r in range(d2.rows):
            x = d2[r, j]
            if x:
                row = index[(p, i, q + 1, r)][1]
                target[(row, col)] = target.get((row, col), 0) + koszul(p) * x
    differential = {
        n: Matrix.from_sparse(space.dim(n + 1), space.dim(n), dok)
        for n, dok in doks.items()
        if space.dim(n + 1)
    }
    return CochainComplex(space, differential)


def euler_characteristic(c: CochainComplex) -> int:
    return c.space.euler_characteristic()


def cohomology_euler(c: CochainComplex) -> int:
    return sum((-1) ** (k % 2) * h for k, h in cohomology_dims(c).items())
