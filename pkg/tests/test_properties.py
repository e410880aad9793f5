"""Propriétés sur des complexes et des catégories DG aléatoires (graines fixes)."""

import random
from fractions import Fraction

import pytest

from src.ainfinity.ainfty import check_stasheff, check_strict_unit, effective_arity
from src.ainfinity.barcobar import bar, cobar, finiteness_report
from src.ainfinity.transfer import minimal_model
from src.algebra.cochain import (
    CochainComplex,
    GradedVS,
    check_complex,
    cohomology_basis,
    cohomology_euler,
    euler_characteristic,
)
from src.algebra.exactla import Matrix, kernel_basis, rank, solve
from src.categories.dgcore import check_dg_axioms, forward_subcategory
from src.categories.mutation import BraidWord, apply_braid, hom_table
from src.categories.pretr import (
    as_nested_cone,
    check_cone,
    check_mc,
    cone,
    embed,
    shift_tw,
    tot,
    twisted_hom,
)
from src.categories.quiver import Arrow, DGQuiver, path_algebra
from src.geometry.uext import collection_of

SEEDS = range(100)
# Les mutations font grossir les complexes tordus : moins d'instances.
MUTATION_SEEDS = range(24)


def random_matrix(rng, rows, cols):
    return Matrix.from_rows([[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)], cols)


def random_complex(rng):
    """C^0 -> C^1 -> C^2 avec d1·d0 = 0 par construction."""
    n0, n1, n2 = (rng.randint(1, 3) for _ in range(3))
    d0 = random_matrix(rng, n1, n0)
    left_kernel = kernel_basis(d0.transpose())
    rows = []
    for _ in range(n2):
        row = [0] * n1
        for v in left_kernel:
            c = rng.randint(-1, 1)
            row = [x + c * y for x, y in zip(row, v)]
        rows.append(row)
    d1 = Matrix.from_rows(rows, n1)
    space = GradedVS({k: [f"e{k}_{i}" for i in range(n)] for k, n in enumerate((n0, n1, n2))})
    return CochainComplex(space, {0: d0, 1: d1})


@pytest.mark.parametrize("seed", SEEDS)
def test_rank_nullity(seed):
    rng = random.Random(seed)
    m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
    kernel = kernel_basis(m)
    assert rank(m) + len(kernel) == m.cols
    for v in kernel:
        assert not any(m.apply(v))
    b = m.apply([rng.randint(-3, 3) for _ in range(m.cols)])
    x = solve(m, b)
    assert x is not None and m.apply(x) == b


@pytest.mark.parametrize("seed", SEEDS)
def test_random_complex_splittings(seed):
    c = random_complex(random.Random(seed))
    assert check_complex(c).ok
    assert cohomology_euler(c) == euler_characteristic(c)
    for strategy in ("first", "last"):
        assert cohomology_basis(c, strategy).check().ok


def random_dg_quiver(rng):
    """
    Carquois DG acyclique v0 -> v1 -> ... : flèches de degré 0 ou 1 entre
    sommets consécutifs, et parfois c : v_k -> v_(k+2) de degré -1 avec ∂c
    combinaison de chemins de longueur 2 en degré 0 (donc ∂² = 0).
    """
    n = rng.randint(3, 4)
    vertices = tuple(f"v{k}" for k in range(n))
    doubled = rng.randrange(n - 1)
    arrows = []
    for k in range(n - 1):
        for m in range(2 if k == doubled else 1):
            degree = 0 if k == 0 or rng.random() < 0.6 else 1
            arrows.append(Arrow(f"a{k}{m}", vertices[k], vertices[k + 1], degree))
    differential = {}
    for k in range(n - 2):
        paths = [
            (b.name, a.name)
            for a in arrows
            for b in arrows
            if a.src == vertices[k] and a.tgt == b.src == vertices[k + 1] and b.tgt == vertices[k + 2]
            and a.degree == b.degree == 0
        ]
        if paths and rng.random() < 0.6:
            name = f"c{k}"
            arrows.append(Arrow(name, vertices[k], vertices[k + 2], -1))
            chosen = rng.sample(paths, rng.randint(1, len(paths)))
            differential[name] = {path: Fraction(rng.choice((-2, -1, 1, 2))) for path in chosen}
    return DGQuiver(vertices, tuple(arrows), differential=differential, name=f"aleatoire_{n}")


def random_dg_category(rng):
    return forward_subcategory(path_algebra(random_dg_quiver(rng)))


def random_closed_map(rng, c):
    """Combinaison aléatoire non nulle de cocycles de degré 0 entre deux objets plongés."""
    candidates = []
    for i in range(c.size):
        for j in range(i + 1, c.size):
            hom = twisted_hom(embed(c, i), embed(c, j))
            cocycles = kernel_basis(hom.complex.d(0))
            if cocycles:
                candidates.append((hom, cocycles))
    hom, cocycles = rng.choice(candidates)
    space = hom.complex.space
    while True:
        combo = [rng.randint(-2, 2) for _ in cocycles]
        if any(combo):
            break
    element = {}
    for x, v in zip(combo, cocycles):
        for pos, value in enumerate(v):
            if x * value:
                flat = space.flat(0, pos)
                element[flat] = element.get(flat, 0) + x * value
    return hom.morphism({k: Fraction(v) for k, v in element.items() if v}, degree=0)


def random_strong_collection(rng):
    """Trois projectifs d'un carquois v0 -> v1 => v2 (flèches de degré 0, sans relation)."""
    vertices = ("v0", "v1", "v2")
    arrows = [Arrow("a", "v0", "v1")]
    arrows += [Arrow(f"b{m}", "v1", "v2") for m in range(rng.randint(1, 2))]
    arrows += [Arrow(f"c{m}", "v0", "v2") for m in range(rng.randint(0, 1))]
    return collection_of(path_algebra(DGQuiver(vertices, tuple(arrows), name="fort")))


@pytest.mark.parametrize("seed", SEEDS)
def test_transfer_satisfies_stasheff(seed):
    c = random_dg_category(random.Random(seed))
    assert check_dg_axioms(c).ok
    a = minimal_model(c).structure
    assert check_stasheff(a, up_to=effective_arity(a)).ok
    assert check_strict_unit(a).ok
    for (i, j) in c.pairs():
        assert a.space(i, j).dims() == c.cohomology(i, j)


@pytest.mark.parametrize("seed", SEEDS)
def test_bar_and_cobar_identities(seed):
    c = random_dg_category(random.Random(seed))
    b = bar(minimal_model(c).structure)
    assert b.check_d2().ok
    assert b.check_coleibniz().ok
    u = cobar(b)
    assert check_dg_axioms(u).ok
    assert finiteness_report(u).ok


@pytest.mark.parametrize("seed", SEEDS)
def test_cone_identities_and_mc(seed):
    rng = random.Random(seed)
    c = random_dg_category(rng)
    f = random_closed_map(rng, c)
    assert check_cone(f).ok
    cf = cone(f)
    assert check_mc(cf).ok
    for n in (-2, -1, 1, 2):
        assert check_mc(shift_tw(cf, n)).ok
    total = tot(as_nested_cone(f))
    assert check_mc(total).ok
    assert total.terms == cf.terms and total.q == cf.q
    assert check_complex(twisted_hom(cf, cf).complex).ok


@pytest.mark.parametrize("seed", MUTATION_SEEDS)
def test_left_then_right_mutation_round_trip(seed):
    rng = random.Random(seed)
    col = random_strong_collection(rng)
    i = rng.randint(1, 2)
    expected = hom_table(col)
    for word in (f"L{i} R{i}", f"R{i} L{i}"):
        assert hom_table(apply_braid(col, BraidWord.parse(word))) == expected, word


@pytest.mark.parametrize("seed", MUTATION_SEEDS)
def test_braid_relation(seed):
    col = random_strong_collection(random.Random(seed))
    first = apply_braid(col, BraidWord.parse("L1 L2 L1"))
    second = apply_braid(col, BraidWord.parse("L2 L1 L2"))
    assert hom_table(first) == hom_table(second)
