"""
Algèbre linéaire exacte sur les rationnels.

Fonctionnalités :
- Matrices denses à coefficients `Fraction` (immuables)
- Rang, noyau, image, résolution de systèmes
- Compléments et projections sur un quotient

Le pivotage est délégué à `sympy.polys.matrices.DomainMatrix` sur `QQ` ;
les résultats sont déterministes (pivots de gauche à droite).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from src.errors import StructureError

Rational = Fraction
Vector = tuple


def to_rational(value) -> Fraction:
    """Convertit un entier, une chaîne "p/q" ou un élément de QQ en Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def vector(values: Iterable) -> Vector:
    return tuple(to_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise StructureError(
                f"matrice {self.rows}x{self.cols} avec {len(self.entries)} coefficients"
            )

    # ==================== Constructeurs ====================

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [vector(r) for r in rows]
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != width for r in rows):
            raise StructureError("lignes de longueurs differentes")
        return cls(len(rows), width, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [vector(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise StructureError(f"colonnes incompatibles avec {rows} lignes")
        return cls(rows, len(columns), tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def from_sparse(cls, rows: int, cols: int, dok: dict) -> "Matrix":
        entries = [Fraction(0)] * (rows * cols)
        for (i, j), value in dok.items():
            entries[i * cols + j] = to_rational(value)
        return cls(rows, cols, tuple(entries))

    @classmethod
    def from_domain(cls, dm: DomainMatrix) -> "Matrix":
        rows, cols = dm.shape
        entries = [Fraction(0)] * (rows * cols)
        for (i, j), value in dm.to_dok().items():
            entries[i * cols + j] = to_rational(value)
        return cls(rows, cols, tuple(entries))

    # ==================== Accès ====================

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def to_dok(self) -> dict:
        return {
            (i, j): x
            for i in range(self.rows)
            for j in range(self.cols)
            if (x := self.entries[i * self.cols + j]) != 0
        }

    def to_domain(self) -> DomainMatrix:
        dok = {key: QQ(x.numerator, x.denominator) for key, x in self.to_dok().items()}
        return DomainMatrix.from_dok(dok, self.shape, QQ)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    # ==================== Opérations ====================

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise StructureError(f"produit impossible : {self.shape} @ {other.shape}")
        if 0 in (self.rows, self.cols, other.cols):
            return Matrix.zeros(self.rows, other.cols)
        return Matrix.from_domain(self.to_domain().matmul(other.to_domain()))

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise StructureError(f"vecteur de taille {len(v)} pour une matrice {self.shape}")
        nonzero = [(j, x) for j, x in enumerate(v) if x != 0]
        return tuple(
            sum((self.entries[i * self.cols + j] * x for j, x in nonzero), Fraction(0))
            for i in range(self.rows)
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise StructureError(f"somme impossible : {self.shape} + {other.shape}")
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_rational(c)
        return Matrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise StructureError(f"concatenation horizontale impossible : {self.shape} | {other.shape}")
        return Matrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)], self.cols + other.cols) \
            if self.rows else Matrix.zeros(0, self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise StructureError(f"concatenation verticale impossible : {self.shape} / {other.shape}")
        return Matrix(self.rows + other.rows, self.cols, self.entries + other.entries)


# ==================== Réduction ====================

def rref(m: Matrix) -> tuple:
    """Forme échelonnée réduite et colonnes pivots."""
    if m.rows == 0 or m.cols == 0:
        return m, ()
    reduced, pivots = m.to_domain().rref()
    return Matrix.from_domain(reduced), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> list:
    """
    Base du noyau, une colonne libre à la fois.

    Args:
        m: matrice rows x cols

    Returns:
        cols - rank(m) vecteurs v avec m·v = 0
    """
    reduced, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for k, p in enumerate(pivots):
            v[p] = -reduced[k, f]
        basis.append(tuple(v))
    return basis


def image_basis(m: Matrix) -> list:
    _, pivots = rref(m)
    return [m.column(j) for j in pivots]


def solve(m: Matrix, b: Sequence) -> Optional[Vector]:
    """Une solution de m·x = b, ou None si le système est incompatible."""
    if len(b) != m.rows:
        raise StructureError(f"second membre de taille {len(b)} pour une matrice {m.shape}")
    if m.rows == 0:
        return zero_vector(m.cols)
    augmented = m.hstack(Matrix.from_columns([b], m.rows))
    reduced, pivots = rref(augmented)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for k, p in enumerate(pivots):
        x[p] = reduced[k, m.cols]
    return tuple(x)


def _check_ambient(vectors: Sequence, ambient_dim: int) -> None:
    for v in vectors:
        if len(v) != ambient_dim:
            raise StructureError(f"vecteur de taille {len(v)} dans un espace de dimension {ambient_dim}")


def complement_basis(sub: Sequence, ambient_dim: int, prefer: Sequence = ()) -> list:
    """
    Complète `sub` en une base de Q^ambient_dim.

    Les candidats sont essayés dans l'ordre : d'abord `prefer`, puis la base
    canonique ; un candidat est retenu s'il est indépendant des précédents.
    """
    _check_ambient(sub, ambient_dim)
    _check_ambient(prefer, ambient_dim)
    candidates = [vector(v) for v in prefer] + [unit_vector(ambient_dim, i) for i in range(ambient_dim)]
    columns = [vector(v) for v in sub] + candidates
    if ambient_dim == 0:
        return []
    _, pivots = rref(Matrix.from_columns(columns, ambient_dim))
    return [columns[p] for p in pivots if p >= len(sub)]


def quotient_matrix(sub: Sequence, ambient_dim: int, complement: Optional[Sequence] = None) -> Matrix:
    """
    Projection Q^n -> Q^n / span(sub), exprimée dans la base du complément.

    Args:
        sub: vecteurs indépendants du sous-espace
        ambient_dim: dimension ambiante
        complement: complément imposé (par défaut `complement_basis`)
    """
    if complement is None:
        complement = complement_basis(sub, ambient_dim)
    _check_ambient(complement, ambient_dim)
    k = len(complement)
    if k == 0:
        return Matrix.zeros(0, ambient_dim)
    basis = Matrix.from_columns(list(sub) + list(complement), ambient_dim)
    if basis.cols != ambient_dim:
        raise StructureError(f"sous-espace et complement de tailles {len(sub)} + {k} != {ambient_dim}")
    inverse = Matrix.from_domain(basis.to_domain().inv())
    return Matrix(k, ambient_dim, inverse.entries[len(sub) * ambient_dim:])


def coordinates(basis: Sequence, v: Sequence) -> Optional[Vector]:
    """Coordonnées de v dans une famille libre, ou None si v n'est pas dans son span."""
    if not basis:
        return () if is_zero(v) else None
    return solve(Matrix.from_columns(basis, len(v)), v)


def independent_subset(vectors: Sequence, ambient_dim: int) -> list:
    """Indices d'une sous-famille libre maximale (gloutonne, de gauche à droite)."""
    if not vectors or ambient_dim == 0:
        return []
    return list(rref(Matrix.from_columns(vectors, ambient_dim))[1])


def intersection_basis(first: Sequence, second: Sequence, ambient_dim: int) -> list:
    """Base de span(first) ∩ span(second)."""
    if not first or not second or ambient_dim == 0:
        return []
    first = [first[t] for t in independent_subset(first, ambient_dim)]
    stacked = Matrix.from_columns(list(first) + [tuple(-x for x in v) for v in second], ambient_dim)
    vectors = []
    for k in kernel_basis(stacked):
        v = [Fraction(0)] * ambient_dim
        for t, u in enumerate(first):
            if k[t]:
                for s in range(ambient_dim):
                    v[s] += k[t] * u[s]
        vectors.append(tuple(v))
    return [vectors[t] for t in independent_subset(vectors, ambient_dim)]
