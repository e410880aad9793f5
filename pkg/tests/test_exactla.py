from fractions import Fraction

import pytest

from src.algebra.exactla import (
    Matrix,
    complement_basis,
    coordinates,
    image_basis,
    independent_subset,
    intersection_basis,
    kernel_basis,
    quotient_matrix,
    rank,
    solve,
)
from src.errors import StructureError


@pytest.fixture
def singular():
    return Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])


def test_rank_and_kernel(singular):
    assert rank(singular) == 2
    kernel = kernel_basis(singular)
    assert len(kernel) == 1
    assert all(x == 0 for x in singular.apply(kernel[0]))


def test_image_basis_uses_pivot_columns(singular):
    assert image_basis(singular) == [singular.column(0), singular.column(1)]


def test_solve_consistent_and_inconsistent(singular):
    x = solve(singular, (Fraction(3), Fraction(6), Fraction(1)))
    assert singular.apply(x) == (3, 6, 1)
    assert solve(singular, (1, 0, 0)) is None


def test_exact_rationals_no_rounding():
    m = Matrix.from_rows([[3, 1], [1, 3]])
    x = solve(m, (1, 0))
    assert x == (Fraction(3, 8), Fraction(-1, 8))


def test_product_and_shape_errors():
    a = Matrix.from_rows([[1, 2]])
    b = Matrix.from_rows([[1], [1]])
    assert (a @ b).entries == (Fraction(3),)
    with pytest.raises(StructureError):
        a @ a
    with pytest.raises(StructureError):
        a + b


def test_empty_matrices():
    empty = Matrix.zeros(0, 3)
    assert rank(empty) == 0
    assert len(kernel_basis(empty)) == 3
    assert (Matrix.zeros(2, 0) @ Matrix.zeros(0, 4)).shape == (2, 4)


def test_complement_prefers_given_vectors():
    sub = [(1, 0, 0)]
    complement = complement_basis(sub, 3, prefer=[(1, 1, 0)])
    assert complement[0] == (1, 1, 0)
    assert len(complement) == 2


def test_quotient_kills_subspace():
    sub = [(Fraction(1), Fraction(1), Fraction(0))]
    q = quotient_matrix(sub, 3)
    assert q.shape == (2, 3)
    assert all(x == 0 for x in q.apply(sub[0]))
    assert rank(q) == 2


def test_coordinates_and_independence():
    basis = [(1, 0, 1), (0, 1, 1)]
    assert coordinates(basis, (2, 3, 5)) == (2, 3)
    assert coordinates(basis, (0, 0, 1)) is None
    assert independent_subset([(1, 1), (2, 2), (0, 1)], 2) == [0, 2]


def test_intersection_of_planes():
    first = [(1, 0, 0), (0, 1, 0)]
    second = [(0, 1, 0), (0, 0, 1)]
    (v,) = intersection_basis(first, second, 3)
    assert v[0] == 0 and v[2] == 0 and v[1] != 0
