import json

import pytest

from catq.errors import ParseError, ValidationError
from catq.fincat import check_category, check_functor, check_natural
from catq.io import infer_kind, load_json, parse_model
from catq.setlogic import Predicate, forall


def test_worked_predicate(fixtures):
    phi = parse_model(fixtures / "phi.json")
    assert isinstance(phi, Predicate)
    assert phi.over.base.elements == ("1", "2") and phi.over.fiber.elements == ("a", "b")
    assert phi.sorted() == [("1", "a"), ("1", "b")]
    assert repr(forall(phi)) == "{1}"


def test_empty_category(fixtures):
    c = parse_model(fixtures / "empty.json", "category")
    assert c.objects == () and check_category(c).ok


def test_missing_compose_names_the_pair(fixtures):
    with pytest.raises(ValidationError) as info:
        parse_model(fixtures / "missing_compose.json")
    assert "('id1', 'u')" in str(info.value)


def test_every_entry_of_a_valid_table_is_required(fixtures, tmp_path):
    data = load_json(fixtures / "arrow.json")
    for i, (g, f, _) in enumerate(data["compose"]):
        broken = dict(data, compose=data["compose"][:i] + data["compose"][i + 1:])
        path = tmp_path / f"c{i}.json"
        path.write_text(json.dumps(broken))
        with pytest.raises(ValidationError, match=f"'{g}', '{f}'"):
            parse_model(path)


def test_broken_json_position(fixtures):
    with pytest.raises(ParseError, match=r"broken\.json:3:3"):
        parse_model(fixtures / "broken.json")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        parse_model(tmp_path / "nope.json")


def test_top_level_must_be_object(tmp_path):
    p = tmp_path / "list.json"
    p.write_text("[1, 2]")
    with pytest.raises(ValidationError):
        parse_model(p)


def test_kind_inference():
    assert infer_kind({"objects": [], "morphisms": []}) == "category"
    assert infer_kind({"source": "a", "target": "b", "objects": {}, "morphisms": {}}) == "functor"
    assert infer_kind({"kind": "kan"}) == "kan"
    with pytest.raises(ValidationError):
        infer_kind({"kind": "bogus"})
    with pytest.raises(ValidationError):
        infer_kind({"nothing": 1})


def test_expected_kind_enforced(fixtures):
    with pytest.raises(ValidationError, match="expected a functor"):
        parse_model(fixtures / "arrow.json", "functor")


def test_referenced_models(fixtures):
    F = parse_model(fixtures / "collapse.json")
    assert check_functor(F).ok
    t = parse_model(fixtures / "idnat.json")
    assert check_natural(t).ok


def test_other_kinds_load(fixtures):
    sq, phi = parse_model(fixtures / "pullback.json")
    assert phi is None and len(sq.corner) == 2
    gamma, a, sub = parse_model(fixtures / "kan_arrow.json")
    assert sub is not None and sub.is_closed()
    m = parse_model(fixtures / "indexed.json")
    assert set(m.fiber) == set(m.base.objects)
    d = parse_model(fixtures / "diagram.json")
    assert d.shape.objects
    f = parse_model(fixtures / "slice_map.json")
    assert f("z") == 1


def test_invalid_values_become_validation_errors(tmp_path):
    p = tmp_path / "bad_pred.json"
    p.write_text(json.dumps({"gamma": ["1"], "a": ["a"], "phi": [["2", "a"]]}))
    with pytest.raises(ValidationError):
        parse_model(p)
    q = tmp_path / "bad_map.json"
    q.write_text(json.dumps({"from": ["x"], "to": [0], "map": {"x": 7}}))
    with pytest.raises(ValidationError):
        parse_model(q)
