from fractions import Fraction

import pytest

from src.algebra.cochain import CochainComplex, GradedVS
from src.algebra.exactla import Matrix
from src.categories.dgcore import check_dg_axioms
from src.categories.pretr import (
    Term,
    TwistedComplex,
    TwistedMorphism,
    as_nested_cone,
    check_cone,
    check_mc,
    compose_tw,
    cone,
    differential,
    embed,
    full_subcategory,
    identity,
    shift_tw,
    tensor_with_complex,
    tot,
    twisted_hom,
)
from src.errors import MathematicalError, StructureError


def arrow_element(c, name):
    return {c.space(0, 1).labels(0).index(name): Fraction(1)}


@pytest.fixture
def p0(kronecker):
    return embed(kronecker, "P0")


@pytest.fixture
def p1(kronecker):
    return embed(kronecker, "P1")


@pytest.fixture
def x_map(kronecker, p0, p1):
    return TwistedMorphism(p0, p1, 0, {(0, 0): arrow_element(kronecker, "x")})


def test_cone_terms_and_twist(x_map):
    cf = cone(x_map)
    assert cf.terms == (Term(0, 1), Term(1, 0))
    assert cf.q == {(0, 1): x_map.entries[(0, 0)]}
    assert check_mc(cf).ok


def test_cone_identities(x_map):
    assert check_cone(x_map).ok


def test_cone_endomorphisms(x_map):
    cf = cone(x_map)
    assert twisted_hom(cf, cf).cohomology() == {0: 1, 1: 1}


def test_hom_into_cone(x_map, p0, p1):
    cf = cone(x_map)
    assert twisted_hom(p0, cf).cohomology() == {0: 1}
    assert twisted_hom(cf, p1).cohomology() == {1: 1}


def test_differential_squares_to_zero(x_map):
    cf = cone(x_map)
    hom = twisted_hom(cf, cf)
    for flat in range(hom.complex.space.total_dim):
        f = hom.basis_morphism(flat)
        assert differential(differential(f)).is_zero()


def test_identity_is_neutral(x_map):
    cf = cone(x_map)
    hom = twisted_hom(cf, cf)
    for flat in range(hom.complex.space.total_dim):
        f = hom.basis_morphism(flat)
        assert hom.element(compose_tw(identity(cf), f)) == hom.element(f)
        assert hom.element(compose_tw(f, identity(cf))) == hom.element(f)


def test_shift_negates_twist(x_map):
    cf = cone(x_map)
    shifted = shift_tw(cf, 1)
    assert [t.shift for t in shifted.terms] == [2, 1]
    assert shifted.q[(0, 1)] == {a: -x for a, x in cf.q[(0, 1)].items()}
    assert check_mc(shifted).ok
    assert twisted_hom(shifted, shifted).cohomology() == {0: 1, 1: 1}


def test_convolution_matches_cone(x_map):
    nested = as_nested_cone(x_map)
    total = tot(nested)
    cf = cone(x_map)
    assert total.terms == cf.terms
    assert total.q == cf.q


def test_tensor_with_vector_space(p0, p1):
    v = CochainComplex(GradedVS({0: ["a", "b"]}))
    doubled = tensor_with_complex(p1, v)
    assert len(doubled.terms) == 2
    assert twisted_hom(p0, doubled).cohomology() == {0: 4}


def test_tensor_with_acyclic_complex_is_contractible(kronecker, p1):
    v = CochainComplex(GradedVS({0: ["a"], 1: ["b"]}), {0: Matrix.from_rows([[1]])})
    contractible = tensor_with_complex(p1, v)
    assert check_mc(contractible).ok
    assert twisted_hom(contractible, contractible).cohomology() == {}


def test_cone_requires_closed_degree_zero(kronecker, p0, p1):
    wrong = TwistedMorphism(p0, p1, 1, {(0, 0): arrow_element(kronecker, "x")})
    with pytest.raises(MathematicalError):
        cone(wrong)


def test_twist_degree_checked(kronecker):
    with pytest.raises(StructureError, match="degre"):
        TwistedComplex(kronecker, (Term(0, 0), Term(1, 0)), {(0, 1): arrow_element(kronecker, "x")})


def test_full_subcategory_of_cone(kronecker, x_map, p0, p1):
    cf = cone(x_map)
    c = full_subcategory([p0, p1, cf], names=["P0", "P1", "C(x)"])
    assert check_dg_axioms(c).ok
    assert c.cohomology(0, 2) == {0: 1}
    assert c.cohomology(2, 2) == {0: 1, 1: 1}
    assert c.unit_index(2) is not None
