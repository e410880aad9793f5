"""Fixtures partagées : petits carquois et carquois DG livrés dans fixtures/."""

from fractions import Fraction

import pytest

from config import fixture_config
from src.categories.dgcore import forward_subcategory
from src.categories.quiver import Arrow, DGQuiver, path_algebra
from src.storage.dgq_file import DgqFile

ONE = Fraction(1)


@pytest.fixture
def a3_quiver():
    """1 -> 2 -> 3 avec la relation b·a = 0."""
    return DGQuiver(
        ("1", "2", "3"),
        (Arrow("a", "1", "2"), Arrow("b", "2", "3")),
        relations=[{("b", "a"): ONE}],
        name="a3",
    )


@pytest.fixture
def a3_dg_quiver():
    """1 -> 2 -> 3 avec une flèche c : 1 -> 3 de degré -1 et ∂c = b·a."""
    return DGQuiver(
        ("1", "2", "3"),
        (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("c", "1", "3", -1)),
        differential={"c": {("b", "a"): ONE}},
        name="a3_dg",
    )


@pytest.fixture
def a3_dg(a3_dg_quiver):
    return path_algebra(a3_dg_quiver)


@pytest.fixture
def kronecker():
    """Carquois de Kronecker 0 => 1, collection exceptionnelle à deux objets."""
    q = DGQuiver(("P0", "P1"), (Arrow("x", "P0", "P1"), Arrow("y", "P0", "P1")), name="kronecker")
    return path_algebra(q)


@pytest.fixture
def a2_graded():
    """0 -> 1 -> 2, flèches u de degré 0 et v de degré 1, sans relation."""
    q = DGQuiver(("0", "1", "2"), (Arrow("u", "0", "1"), Arrow("v", "1", "2", 1)), name="a2_graded")
    return path_algebra(q)


@pytest.fixture(scope="session")
def x_document():
    return DgqFile.load(fixture_config.path(fixture_config.x_surface))


@pytest.fixture(scope="session")
def x_category(x_document):
    return path_algebra(x_document.to_quiver())


@pytest.fixture(scope="session")
def x_ordered(x_category):
    return forward_subcategory(x_category)


def dims_by_name(c):
    """{(source, but): {degré: dimension}} pour les paires non nulles."""
    return {(c.objects[i], c.objects[j]): c.cohomology(i, j) for (i, j) in c.pairs() if c.cohomology(i, j)}
