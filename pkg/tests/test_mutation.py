import pytest

from src.categories.mutation import (
    BraidWord,
    Collection,
    apply_braid,
    canonical_coeval,
    canonical_eval,
    euler_form,
    euler_number,
    hom_table,
    left_mutation,
    mutated_euler_row,
    right_mutation,
)
from src.categories.pretr import check_mc, embed, twisted_hom
from src.errors import InputError, StructureError
from src.geometry.uext import collection_of


@pytest.fixture
def pair(kronecker):
    return collection_of(kronecker)


def test_braid_word_parsing():
    word = BraidWord.parse("L2 R1")
    assert word.letters == ((2, "L"), (1, "R"))
    assert str(word) == "L2 R1"
    with pytest.raises(InputError):
        BraidWord.parse("X1")


def test_evaluation_and_coevaluation_are_closed(pair):
    p0, p1 = pair.items
    phi = canonical_eval(p0, p1)
    psi = canonical_coeval(p0, p1)
    assert phi.degree == 0 and psi.degree == 0
    assert len(phi.source.terms) == 2
    assert len(psi.target.terms) == 2


def test_left_mutation_is_exceptional_pair(pair):
    p0, p1 = pair.items
    left = left_mutation(p0, p1)
    assert check_mc(left).ok
    assert twisted_hom(left, left).cohomology() == {0: 1}
    assert twisted_hom(p0, left).cohomology() == {}
    assert twisted_hom(left, p0).cohomology() == {0: 2}


def test_right_mutation_is_exceptional_pair(pair):
    p0, p1 = pair.items
    right = right_mutation(p1, p0)
    assert twisted_hom(right, right).cohomology() == {0: 1}
    assert twisted_hom(right, p1).cohomology() == {}
    assert twisted_hom(p1, right).cohomology() == {0: 2}


def test_gram_matrix_transforms(pair):
    gram = euler_form(pair)
    assert gram == [[1, 2], [0, 1]]
    mutated = apply_braid(pair, BraidWord.parse("L1"))
    left = mutated.items[0]
    predicted = mutated_euler_row(gram, 1)
    assert predicted == [2, 3]
    assert [euler_number(twisted_hom(left, e).cohomology()) for e in pair.items] == predicted
    assert euler_form(mutated) == [[1, 2], [0, 1]]


def test_right_braid_keeps_collection_exceptional(pair):
    mutated = apply_braid(pair, BraidWord.parse("R1"))
    table = hom_table(mutated)
    assert table[(0, 0)] == {0: 1} and table[(1, 1)] == {0: 1}
    assert table[(1, 0)] == {}
    assert mutated.names()[0] == "P1"


def test_braid_index_out_of_range(pair):
    with pytest.raises(InputError, match="hors de"):
        apply_braid(pair, BraidWord.parse("L2"))


def test_collection_requires_common_base(kronecker, a3_dg):
    with pytest.raises(StructureError):
        Collection(kronecker, (embed(kronecker, 0), embed(a3_dg, 0)))
