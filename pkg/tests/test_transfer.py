from fractions import Fraction

import pytest

from config import fixture_config
from src.ainfinity.ainfty import check_stasheff, check_strict_unit
from src.ainfinity.transfer import massey3, massey_profile, minimal_model, strictify, suspension_sign
from src.algebra.exactla import Matrix, rank
from src.algebra.sparse import to_dense
from src.categories.dgcore import forward_subcategory
from src.categories.quiver import path_algebra
from src.errors import MathematicalError
from src.storage.ainf_file import load_ainf, save_ainf
from src.storage.dgq_file import DeformationFamily, DgqFile


def class_index(a, i, j, label):
    space = a.space(i, j)
    labels = [space.label(x) for x in range(space.total_dim)]
    return labels.index(label)


def product_ranks(a):
    """Rang de m_2 : H(o_1, o_2) ⊗ H(o_0, o_1) -> H(o_0, o_2), indépendant des bases."""
    ranks = {}
    for o0 in range(a.size):
        for o1 in range(o0 + 1, a.size):
            for o2 in range(o1 + 1, a.size):
                dim = a.dim(o0, o2)
                columns = [
                    to_dense(a.apply((o0, o1, o2), [{z: Fraction(1)}, {y: Fraction(1)}]), dim)
                    for z in range(a.dim(o0, o1))
                    for y in range(a.dim(o1, o2))
                ]
                ranks[(o0, o1, o2)] = rank(Matrix.from_columns(columns, dim)) if columns and dim else 0
    return ranks


@pytest.fixture(scope="module")
def x_minimal(x_ordered):
    return minimal_model(x_ordered)


def test_suspension_sign():
    assert suspension_sign([1, 1]) == 1
    assert suspension_sign([0, 0]) == -1
    assert suspension_sign([2, 0]) == -1


def test_minimal_model_is_minimal(x_minimal):
    a = x_minimal.structure
    assert 1 not in a.ops or not a.ops[1]
    assert a.max_arity == 4
    assert a.space(1, 2).dims() == {0: 1, 1: 1}
    assert a.space(0, 4).dims() == {0: 6}


def test_minimal_model_satisfies_stasheff(x_minimal):
    assert check_stasheff(x_minimal.structure, up_to=4).ok


def test_minimal_model_units_are_strict(x_minimal):
    assert check_strict_unit(x_minimal.structure).ok
    assert strictify(x_minimal) is x_minimal


def test_other_splitting_also_satisfies_stasheff(x_ordered):
    other = minimal_model(x_ordered, max_arity=3, strategy="last")
    assert check_stasheff(other.structure, up_to=3).ok


def test_class_labels(x_minimal):
    a = x_minimal.structure
    labels = {a.label(2, 3, x) for x in range(a.dim(2, 3))}
    assert labels == {"[gamma1]", "[gamma2]"}


def test_massey_product_nonzero(x_minimal):
    a = x_minimal.structure
    x = class_index(a, 2, 3, "[gamma1]")
    y = class_index(a, 1, 2, "[betabar]")
    z = class_index(a, 0, 1, "[alpha]")
    coset = massey3(x_minimal, (0, 1, 2, 3), x, y, z)
    assert coset.degree == 0
    assert len(coset.indeterminacy) == 2
    assert not coset.contains_zero()


def test_massey_product_in_indeterminacy(x_minimal):
    a = x_minimal.structure
    x = class_index(a, 2, 3, "[gamma2]")
    y = class_index(a, 1, 2, "[betabar]")
    z = class_index(a, 0, 1, "[alpha]")
    assert massey3(x_minimal, (0, 1, 2, 3), x, y, z).contains_zero()


def test_massey_product_undefined(x_minimal):
    a = x_minimal.structure
    x = class_index(a, 2, 3, "[gamma1]")
    y = class_index(a, 1, 2, "[beta]")
    z = class_index(a, 0, 1, "[alpha]")
    with pytest.raises(MathematicalError, match="Massey product undefined"):
        massey3(x_minimal, (0, 1, 2, 3), x, y, z)


def test_massey_profile(x_minimal):
    profile = massey_profile(x_minimal)
    assert profile[(0, 1, 2, 3, 0, 1, 0)] == 1


def test_structure_file_keeps_operations(x_minimal, tmp_path):
    path = save_ainf(x_minimal.structure, tmp_path / "x_min.ainf")
    loaded = load_ainf(path)
    assert loaded.objects == x_minimal.structure.objects
    assert {n: len(t) for n, t in loaded.ops.items() if t} == {n: len(t) for n, t in x_minimal.structure.ops.items() if t}
    assert check_stasheff(loaded, up_to=3).ok


def test_first_presentation_is_formal():
    document = DgqFile.load(fixture_config.path(fixture_config.x_first_quiver))
    mm = minimal_model(forward_subcategory(path_algebra(document.to_quiver())))
    a = mm.structure
    assert not any(a.ops.get(3, {}).values())
    x = class_index(a, 2, 3, "[gamma1]")
    y = class_index(a, 1, 2, "[betabar]")
    z = class_index(a, 0, 1, "[alpha]")
    assert massey3(mm, (0, 1, 2, 3), x, y, z).contains_zero()


def test_splitting_choice_keeps_products_and_massey_cosets(x_ordered):
    first = minimal_model(x_ordered, max_arity=3, strategy="first")
    last = minimal_model(x_ordered, max_arity=3, strategy="last")
    a, b = first.structure, last.structure
    for (i, j) in x_ordered.pairs():
        assert a.space(i, j).dims() == b.space(i, j).dims()
    assert product_ranks(a) == product_ranks(b)
    assert any(product_ranks(a).values())
    profile = massey_profile(first)
    assert profile == massey_profile(last)
    assert profile[(0, 1, 2, 3, 0, 1, 0)] == 1


def test_deformed_minimal_model_is_concentrated():
    family = DeformationFamily(DgqFile.load(fixture_config.path(fixture_config.delta_family)))
    mm = minimal_model(forward_subcategory(path_algebra(family.quiver(1))))
    a = mm.structure
    for (i, j) in a.hom:
        assert set(a.space(i, j).degrees()) <= {0}
    assert check_stasheff(a, up_to=4).ok
    assert massey_profile(mm) == {}
