import pytest

from src.algebra.cochain import (
    CochainComplex,
    GradedVS,
    check_complex,
    cohomology_basis,
    cohomology_dims,
    cohomology_euler,
    dual,
    euler_characteristic,
    koszul,
    shift,
    tensor,
)
from src.algebra.exactla import Matrix
from src.errors import StructureError


def make_complex(d1_rows):
    """a -> b en degré 0 -> 1, puis d1 : (b, c) -> e."""
    space = GradedVS({0: ["a"], 1: ["b", "c"], 2: ["e"]})
    return CochainComplex(
        space,
        {0: Matrix.from_rows([[1], [0]]), 1: Matrix.from_rows([d1_rows])},
    )


@pytest.fixture
def complex_with_cohomology():
    return make_complex([0, 0])


def test_graded_space_flat_indexing():
    space = GradedVS({1: ["x"], -1: ["u", "v"]})
    assert space.degrees() == [-1, 1]
    assert space.offset(1) == 2
    assert space.locate(2) == (1, 0)
    assert space.label(1) == "v"
    assert space.euler_characteristic() == -3


def test_duplicate_labels_rejected():
    with pytest.raises(StructureError):
        GradedVS({0: ["x", "x"]})


def test_koszul_sign():
    assert koszul(1, 1) == -1
    assert koszul(1, 2) == 1
    assert koszul() == 1


def test_cohomology_dims(complex_with_cohomology):
    assert check_complex(complex_with_cohomology).ok
    assert cohomology_dims(complex_with_cohomology) == {1: 1, 2: 1}
    assert cohomology_euler(complex_with_cohomology) == euler_characteristic(complex_with_cohomology)


def test_acyclic_complex():
    acyclic = make_complex([0, 1])
    assert cohomology_dims(acyclic) == {}


def test_d_squared_failure_is_reported():
    broken = make_complex([1, 0])
    report = check_complex(broken)
    assert not report.ok
    assert report.failures[0]["degree"] == 0
    with pytest.raises(StructureError):
        cohomology_dims(broken)


@pytest.mark.parametrize("strategy", ["first", "last"])
def test_splitting_identities(complex_with_cohomology, strategy):
    split = cohomology_basis(complex_with_cohomology, strategy=strategy)
    assert split.check().ok
    assert split.h_dim(1) == 1
    assert split.h_dim(0) == 0


def test_splitting_keeps_standard_cocycles(complex_with_cohomology):
    split = cohomology_basis(complex_with_cohomology)
    # c est un cocycle de base, il est son propre représentant
    assert split.representatives[1] == [(0, 1)]


def test_shift_and_dual(complex_with_cohomology):
    assert cohomology_dims(shift(complex_with_cohomology, 1)) == {0: 1, 1: 1}
    assert cohomology_dims(dual(complex_with_cohomology)) == {-2: 1, -1: 1}
    assert check_complex(dual(make_complex([0, 1]))).ok


def test_tensor_kunneth(complex_with_cohomology):
    line = CochainComplex(GradedVS({0: ["u"], 1: ["w"]}))
    product = tensor(complex_with_cohomology, line)
    assert check_complex(product).ok
    assert cohomology_dims(product) == {1: 1, 2: 2, 3: 1}
