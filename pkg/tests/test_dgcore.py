import pytest

from config import fixture_config
from src.categories.dgcore import (
    check_dg_axioms,
    collapse_CIJ,
    exceptionality_report,
    format_combination,
    forward_subcategory,
    hom_cohomology,
    is_exceptional_collection,
    named_table,
    rebase_units,
    truncate_CI,
)
from src.categories.quiver import path_algebra
from src.errors import InputError, MathematicalError
from src.storage.dgq_file import DeformationFamily, DgqFile

from tests.conftest import dims_by_name

X_COHOMOLOGY = {
    ("O", "O(E2)"): {0: 1},
    ("O(E2)", "O(E1+E2)"): {0: 1, 1: 1},
    ("O(E1+E2)", "O(H)"): {0: 2},
    ("O(H)", "O(2H)"): {0: 3},
    ("O", "O(E1+E2)"): {0: 1},
    ("O(E2)", "O(H)"): {0: 2},
    ("O", "O(H)"): {0: 3},
    ("O(E1+E2)", "O(2H)"): {0: 5},
    ("O(E2)", "O(2H)"): {0: 5},
    ("O", "O(2H)"): {0: 6},
}


def test_format_combination():
    assert format_combination(["x", "y"], [1, 0]) == "x"
    assert format_combination(["x", "y"], [-1, 2]) == "(-x+2*y)"
    assert format_combination(["x"], [0]) == "0"


def test_x_surface_cohomology_table(x_category):
    table = dims_by_name(x_category)
    for pair, dims in X_COHOMOLOGY.items():
        assert table[pair] == dims, pair
    for name in x_category.objects:
        assert table[(name, name)] == {0: 1}


def test_first_presentation_has_same_table(x_category):
    document = DgqFile.load(fixture_config.path(fixture_config.x_first_quiver))
    first = path_algebra(document.to_quiver())
    assert check_dg_axioms(first).ok
    assert dims_by_name(first) == dims_by_name(x_category)


def test_x_surface_axioms_and_exceptionality(x_category):
    assert check_dg_axioms(x_category).ok
    assert exceptionality_report(x_category).ok
    assert is_exceptional_collection(x_category)


def test_named_table(a3_dg):
    table = named_table(a3_dg, hom_cohomology(a3_dg))
    assert table[("1", "2")] == {0: 1}
    assert table[("1", "3")] == {}


def test_index_lookup(a3_dg):
    assert a3_dg.index("2") == 1
    with pytest.raises(InputError):
        a3_dg.index("4")


def test_forward_subcategory_is_ordered_and_reduced(x_ordered):
    assert x_ordered.ordered and x_ordered.reduced
    assert check_dg_axioms(x_ordered).ok
    assert dims_by_name(x_ordered)[("O(E2)", "O(E1+E2)")] == {0: 1, 1: 1}


def test_truncation_keeps_negative_degrees(a3_dg):
    truncated, inclusion = truncate_CI(a3_dg)
    assert truncated.space(0, 2).dims() == {-1: 1, 0: 1}
    assert inclusion[(0, 2)].shape == (2, 2)
    assert check_dg_axioms(truncated).ok


def test_collapse_to_cohomology(a3_dg):
    collapsed = collapse_CIJ(a3_dg)
    assert collapsed.dim(0, 1) == 1
    assert collapsed.dim(0, 2) == 0
    assert check_dg_axioms(collapsed).ok


def test_collapse_rejects_non_concentrated(x_category):
    with pytest.raises(MathematicalError, match="not quasi-ordinary"):
        collapse_CIJ(x_category)


def test_kronecker_is_exceptional(kronecker):
    assert is_exceptional_collection(kronecker)
    report = exceptionality_report(kronecker)
    assert report.checked == 4


def test_rebase_units_keeps_axioms(kronecker):
    rebased = rebase_units(kronecker)
    assert check_dg_axioms(rebased).ok
    assert rebased.unit_index(0) is not None
    assert rebased.dim(0, 1) == 2


def test_forward_subcategory_drops_loops(a3_dg):
    ordered = forward_subcategory(a3_dg)
    assert ordered.dim(0, 0) == 1
    assert ordered.dim(0, 2) == 2


@pytest.fixture(scope="module")
def y_category():
    return path_algebra(DgqFile.load(fixture_config.path(fixture_config.y_surface)).to_quiver())


@pytest.mark.parametrize("t", [1, 2, -1])
def test_nonzero_deformation_collapses_to_y(t, y_category):
    family = DeformationFamily(DgqFile.load(fixture_config.path(fixture_config.delta_family)))
    deformed = path_algebra(family.quiver(t))
    for pair, dims in hom_cohomology(deformed).items():
        assert set(dims) <= {0}, pair
    collapsed = collapse_CIJ(deformed)
    assert collapsed.size == y_category.size
    for (i, j) in y_category.pairs():
        assert collapsed.cohomology(i, j) == y_category.cohomology(i, j), (y_category.objects[i], y_category.objects[j])
