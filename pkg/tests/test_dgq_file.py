from fractions import Fraction

import pytest

from config import fixture_config
from src.categories.quiver import check_quiver, path_algebra
from src.errors import InputError
from src.storage.dgq_file import DeformationFamily, DgqFile, canonical_json, parse_coefficient
from tests.conftest import dims_by_name


def load(name):
    return DgqFile.load(fixture_config.path(name))


def test_all_fixtures_load():
    for name in fixture_config.names:
        document = load(name)
        assert document.data["vertices"]


def test_canonical_round_trip_of_x(x_document):
    text = fixture_config.path(fixture_config.x_surface).read_text(encoding="utf-8")
    assert x_document.dumps() == text
    assert text.endswith("}\n")


def test_save(tmp_path, x_document):
    target = x_document.save(tmp_path / "copie" / "x.dgq")
    assert target.read_bytes() == x_document.dumps().encode("utf-8")


def test_from_quiver_keeps_lattice(x_document):
    copy = DgqFile.from_quiver(x_document.to_quiver(), lattice=x_document.lattice())
    assert copy.lattice() == x_document.lattice()
    assert copy.to_quiver().arrows == x_document.to_quiver().arrows


def test_invalid_json_is_located():
    with pytest.raises(InputError) as info:
        DgqFile.loads('{"vertices": [}')
    assert (info.value.line, info.value.column) == (1, 15)


def test_missing_key():
    with pytest.raises(InputError, match="cle obligatoire manquante"):
        DgqFile.loads('{"vertices": [], "arrows": []}')


def test_unknown_arrow_is_located():
    text = (
        "{\n"
        '  "vertices": ["1", "2"],\n'
        '  "arrows": [{"name": "a", "src": "1", "tgt": "2"}],\n'
        '  "relations": [[{"coeff": "1", "path": ["zz"]}]]\n'
        "}\n"
    )
    with pytest.raises(InputError, match="fleche inconnue") as info:
        DgqFile.loads(text).to_quiver()
    assert info.value.line == 4
    assert info.value.column == text.splitlines()[3].index('"zz"') + 1


def test_parse_coefficient():
    assert parse_coefficient("3/4") == Fraction(3, 4)
    assert parse_coefficient("-2") == Fraction(-2)
    assert parse_coefficient("1 - t", {"t": Fraction(1, 2)}) == Fraction(1, 2)
    assert parse_coefficient("t**2 + 1", {"t": 3}) == Fraction(10)


@pytest.mark.parametrize("text, parameters", [("x", None), ("1/0", None), ("sqrt(t)", {"t": 2})])
def test_parse_coefficient_rejects(text, parameters):
    with pytest.raises(InputError):
        parse_coefficient(text, parameters)


# ==================== Familles ====================

@pytest.fixture(scope="module")
def family():
    return DeformationFamily(load(fixture_config.delta_family))


def test_family_must_be_specialized(family):
    assert family.document.is_family
    with pytest.raises(InputError, match="specialiser"):
        family.document.to_quiver()


def test_family_at_zero_is_x(family):
    text = fixture_config.path(fixture_config.x_surface).read_text(encoding="utf-8")
    assert family.specialize(0).dumps() == text


def test_family_at_one_deforms_beta(family):
    q = family.quiver(Fraction(1))
    assert q.differential["beta"] == {("betabar",): Fraction(1)}
    assert "beta" not in family.quiver(0).differential


def test_family_needs_one_parameter(x_document):
    with pytest.raises(InputError, match="un parametre"):
        DeformationFamily(x_document)


# ==================== Autres surfaces ====================

def test_y_surface_dimensions():
    document = load(fixture_config.y_surface)
    assert check_quiver(document.to_quiver()).ok
    dims = dims_by_name(path_algebra(document.to_quiver()))
    assert dims[("O", "O(H)")].get(0) == 3
    assert dims[("O(F2)", "O(2H)")].get(0) == 5
    assert dims[("O(F1)", "O(2H)")].get(0) == 5
    assert dims[("O", "O(2H)")].get(0) == 6


def test_v_collection_has_backward_morphism():
    document = load(fixture_config.v_collection)
    assert document.lattice() is None
    assert "comment" in document.data
    dims = dims_by_name(path_algebra(document.to_quiver()))
    assert dims[("O(E1+E2)", "V")] == {0: 1}
    assert dims[("O", "V")] == {0: 2}


def test_canonical_json_sorts_keys():
    assert canonical_json({"b": 1, "a": "é"}) == '{\n  "a": "é",\n  "b": 1\n}\n'
