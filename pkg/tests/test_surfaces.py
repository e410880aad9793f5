from fractions import Fraction

import pytest

from config import fixture_config
from src.categories.quiver import Arrow, DGQuiver
from src.errors import InputError
from src.geometry.surfaces import (
    GaugeChange,
    PicardLattice,
    apply_gauges,
    augment_chain,
    augment_collection,
    chi,
    chi_pair,
    euler_pairing,
    format_divisor,
    parse_divisor,
    riemann_roch_report,
    vertex_divisor,
)
from src.storage.dgq_file import DgqFile

ONE = Fraction(1)


@pytest.fixture(scope="module")
def x_lattice(x_document):
    return x_document.lattice()


@pytest.fixture(scope="module")
def y_lattice():
    return DgqFile.load(fixture_config.path(fixture_config.y_surface)).lattice()


def test_lattice_from_document(x_lattice):
    assert x_lattice.generators == ("H", "E1", "E2")
    assert x_lattice.form == ((1, 0, 0), (0, -2, 1), (0, 1, -1))
    assert x_lattice.canonical == (-3, 1, 2)
    assert x_lattice.to_dict()["canonical"] == "-3H+E1+2E2"


def test_parse_divisor(x_lattice):
    assert parse_divisor(x_lattice, "H-E2") == (1, 0, -1)
    assert parse_divisor(x_lattice, "2H") == (2, 0, 0)
    assert parse_divisor(x_lattice, "0") == (0, 0, 0)
    assert parse_divisor(x_lattice, "E1 + E2 - 3H") == (-3, 1, 1)


@pytest.mark.parametrize(
    "text, expected",
    [("2E2", (0, 0, 2)), ("-3H+E1+2E2", (-3, 1, 2)), ("10H", (10, 0, 0)), ("2 E1-E2", (0, 2, -1))],
)
def test_parse_divisor_coefficient_before_indexed_generator(x_lattice, text, expected):
    assert parse_divisor(x_lattice, text) == expected


def test_canonical_class_survives_format_and_parse(x_lattice):
    text = format_divisor(x_lattice, x_lattice.canonical)
    assert parse_divisor(x_lattice, text) == x_lattice.canonical


@pytest.mark.parametrize("text", ["H/2", "Z", "H*E1", "H+", "1.5H", "2e2"])
def test_parse_divisor_rejects(x_lattice, text):
    with pytest.raises(InputError):
        parse_divisor(x_lattice, text)


def test_format_divisor(x_lattice):
    assert format_divisor(x_lattice, (1, 0, -1)) == "H-E2"
    assert format_divisor(x_lattice, (-3, 1, 2)) == "-3H+E1+2E2"
    assert format_divisor(x_lattice, (0, 0, 0)) == "0"


def test_vertex_divisor(x_lattice):
    assert vertex_divisor(x_lattice, "O") == (0, 0, 0)
    assert vertex_divisor(x_lattice, "O(E1+E2)") == (0, 1, 1)
    with pytest.raises(InputError, match="fibre en droites"):
        vertex_divisor(x_lattice, "V")


@pytest.mark.parametrize(
    "divisor, expected",
    [("0", 1), ("H", 3), ("2H", 6), ("H-E2", 2), ("E1", 0), ("-E1", 0), ("E2", 1)],
)
def test_chi_on_x(x_lattice, divisor, expected):
    assert chi(x_lattice, parse_divisor(x_lattice, divisor)) == expected


def test_chi_on_y(y_lattice):
    assert chi(y_lattice, parse_divisor(y_lattice, "H")) == 3
    assert chi(y_lattice, parse_divisor(y_lattice, "F1")) == 1
    assert chi(y_lattice, parse_divisor(y_lattice, "2H-F1")) == 5
    assert chi_pair(y_lattice, (0, 0, 0), (2, 0, 0)) == 6


def test_chi_rejects_odd_intersection():
    lattice = PicardLattice(("H",), ((1,),), (0,))
    with pytest.raises(InputError, match="impair"):
        chi(lattice, (1,))


def test_lattice_must_be_symmetric():
    with pytest.raises(InputError, match="non symetrique"):
        PicardLattice(("A", "B"), ((0, 1), (0, 0)), (0, 0))


def test_riemann_roch_matches_euler_pairing(x_lattice, x_category):
    rows = riemann_roch_report(x_lattice, x_category)
    assert len(rows) == 25
    assert all(rr == euler for _, _, rr, euler in rows)
    assert euler_pairing(x_category, 0, 4) == 6


def test_augment_collection(x_lattice):
    base = [(0, 0, 0), (1, 0, 0), (2, 0, 0)]
    assert augment_collection(x_lattice, base, (0, 1, 1), 1) == [
        (0, 0, 0),
        (0, 1, 1),
        (1, 0, 0),
        (2, 0, 0),
    ]
    assert augment_collection(x_lattice, base, (0, 0, 1), 3) == [
        (0, 0, 1),
        (1, 0, 1),
        (2, 0, 0),
        (2, 0, 1),
    ]
    with pytest.raises(InputError):
        augment_collection(x_lattice, base, (0, 0, 1), 4)


def test_augment_chain_reaches_x_collection(x_lattice, x_category):
    classes = augment_chain(x_lattice, [(0, 0, 0), (1, 0, 0), (2, 0, 0)], [("E1+E2", 1), ("E2", 1)])
    names = [f"O({format_divisor(x_lattice, d)})" if any(d) else "O" for d in classes]
    assert tuple(names) == x_category.objects


@pytest.fixture
def two_step_quiver():
    """1 => 2 -> 3 avec la relation z·x = 0."""
    return DGQuiver(
        ("1", "2", "3"),
        (Arrow("x", "1", "2"), Arrow("y", "1", "2"), Arrow("z", "2", "3")),
        relations=[{("z", "x"): ONE}],
        name="q",
    )


def test_shear_moves_relation(two_step_quiver):
    change = GaugeChange.shear("x", {("y",): 1})
    gauged = change.apply(two_step_quiver)
    assert gauged.name == "q_x_shear"
    assert gauged.relations == [{("z", "x"): ONE, ("z", "y"): ONE}]


def test_shear_then_inverse_is_identity(two_step_quiver):
    gauged = apply_gauges(
        two_step_quiver,
        [GaugeChange.shear("x", {("y",): 1}), GaugeChange.shear("x", {("y",): -1})],
    )
    assert gauged.relations == [{("z", "x"): ONE}]


def test_shear_must_be_invertible():
    with pytest.raises(InputError, match="non inversible"):
        GaugeChange.shear("x", {("x", "y"): 1})
