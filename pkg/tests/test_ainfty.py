from fractions import Fraction

import pytest

from src.ainfinity.ainfty import (
    AInfinityStructure,
    augment,
    check_ordered_vanishing,
    check_stasheff,
    check_strict_unit,
    default_arity,
    effective_arity,
    from_dg,
)
from src.algebra.cochain import GradedVS
from src.categories.quiver import Arrow, DGQuiver, path_algebra
from src.errors import InputError, MathematicalError


def test_dg_category_satisfies_stasheff(a3_dg):
    a = from_dg(a3_dg)
    assert a.max_arity == 2
    assert check_stasheff(a).ok
    assert check_strict_unit(a).ok


def test_from_dg_tables(a3_dg):
    a = from_dg(a3_dg)
    assert len(a.ops[1]) == 1
    (objs, idxs), value = next(iter(a.ops[1].items()))
    assert objs == (0, 2)
    assert a.label(0, 2, idxs[0]) == "c"
    assert [a.label(0, 2, y) for y in value] == ["b*a"]


def test_chain_label_reads_right_to_left(a3_dg):
    a = from_dg(a3_dg)
    assert a.chain_label((0, 1, 2), (0, 0)) == "(b, a)"


def test_m1_squared_nonzero_is_reported():
    space = GradedVS({-1: ["w"], 0: ["x"], 1: ["y"]})
    ops = {1: {((0, 0), (0,)): {1: Fraction(1)}, ((0, 0), (1,)): {2: Fraction(1)}}}
    broken = AInfinityStructure(("A",), {(0, 0): space}, ops, max_arity=1, name="broken")
    report = check_stasheff(broken)
    assert not report.ok
    assert report.failures[0]["arity"] == 1
    assert report.failures[0]["residue"] == {"y": "1"}


def test_higher_operation_on_unit_is_not_strict(x_ordered):
    a = from_dg(x_ordered)
    unit = a.unit_index(0)
    a.ops[3] = {((0, 0, 1, 2), (unit, 0, 0)): {0: Fraction(1)}}
    report = check_strict_unit(a, up_to=3)
    assert [f["kind"] for f in report.failures] == ["unit not strict"]


def test_augmentation_of_ordered_category(x_ordered):
    aug = augment(from_dg(x_ordered))
    assert (0, 0) not in aug.reduced
    assert aug.is_reduced(0, 4, 0)


def test_augmentation_rejects_loops():
    q = DGQuiver(("1",), (Arrow("x", "1", "1"),), relations=[{("x", "x"): Fraction(1)}])
    with pytest.raises(MathematicalError, match="not augmentable"):
        augment(from_dg(path_algebra(q, max_path_len=3)))


def test_arity_bounds(x_ordered, a3_dg):
    assert default_arity(x_ordered, None) == 4
    assert default_arity(a3_dg, 3) == 3
    with pytest.raises(InputError):
        default_arity(a3_dg, None)
    assert effective_arity(from_dg(x_ordered)) == 4


def test_ordered_vanishing_on_dg_embedding(x_ordered):
    assert check_ordered_vanishing(from_dg(x_ordered)).ok
