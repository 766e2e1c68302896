import json

import pytest

from syscons.document import DocumentError, dumps, load, loads, schema, system_to_dict, from_dict
from syscons.generate import random_systems
from syscons.infoflow import seq


def raw_of(fixtures, name):
    with open(fixtures(name)) as fh:
        return json.load(fh)


def test_span_loads(fixtures):
    doc = load(fixtures("span.sys"))
    assert doc.formal
    assert len(doc.system.shape.nodes) == 3 and len(doc.system.shape.edges) == 2
    assert doc.bound == 3
    assert doc.institution.name == "folf"


def test_community_loads(fixtures):
    doc = load(fixtures("community.sys"))
    assert not doc.formal
    assert len(doc.system.shape.nodes) == 9 and len(doc.system.shape.edges) == 11
    assert doc.system.theory("L2").sentences == {seq((), ["personnel"])}


def test_broken_infomorphism_names_pair(fixtures):
    with pytest.raises(DocumentError, match=r"\(instance 'x2', type 'a'\)"):
        load(fixtures("broken_infomorphism.sys"))


def test_json_syntax_error_has_position():
    with pytest.raises(DocumentError) as info:
        loads('{\n  "institution": "if",\n  "languages": {,}\n}')
    assert (info.value.line, info.value.column) == (3, 17)
    assert "line 3, column 17" in str(info.value)


def test_schema_violation_has_path(fixtures):
    raw = raw_of(fixtures, "discrete.sys")
    raw["institution"] = "modal"
    with pytest.raises(DocumentError) as info:
        from_dict(raw)
    assert info.value.path == "$.institution"


def test_dangling_references(fixtures):
    raw = raw_of(fixtures, "discrete.sys")
    raw["nodes"]["left"]["structure"] = "Nope"
    with pytest.raises(DocumentError, match="unknown structure 'Nope'"):
        from_dict(raw)
    raw = raw_of(fixtures, "span.sys")
    raw["shape"]["edges"][0]["target"] = "ghost"
    with pytest.raises(DocumentError, match="unknown node 'ghost'"):
        from_dict(raw)
    raw = raw_of(fixtures, "span.sys")
    raw["shape"]["edges"][0]["morphism"] = "nothing"
    with pytest.raises(DocumentError, match="unknown morphism"):
        from_dict(raw)


def test_bad_sentence_reports_path(fixtures):
    raw = raw_of(fixtures, "span.sys")
    raw["nodes"]["refl_node"]["theory"] = ["forall x. S(x,x)"]
    with pytest.raises(DocumentError) as info:
        from_dict(raw)
    assert info.value.path == "$.nodes.refl_node.theory[0]"


def test_nested_system_rejected(fixtures):
    raw = raw_of(fixtures, "discrete.sys")
    raw["nodes"]["left"]["system"] = {"shape": {"nodes": []}}
    with pytest.raises(DocumentError, match="nested systems"):
        from_dict(raw)


def test_edge_that_is_not_a_spec_morphism(fixtures):
    raw = raw_of(fixtures, "span.sys")
    raw["nodes"]["refl_node"]["theory"].append("forall x. forall y. R(x,y) -> R(y,x) -> x = y")
    with pytest.raises(DocumentError, match="specification morphism"):
        from_dict(raw)


def test_schema_is_shipped():
    s = schema()
    assert set(s["required"]) >= {"institution", "languages", "shape", "nodes"}


def test_missing_file():
    with pytest.raises(DocumentError, match="cannot read"):
        load("/nonexistent/system.sys")


def test_random_systems_round_trip():
    for system in random_systems(31, 20):
        raw = system_to_dict(system)
        again = loads(dumps(raw)).system
        assert again.shape == system.shape
        for n in system.shape.nodes:
            assert again.theory(n).sentences == system.theory(n).sentences
            assert again.nodes[n].structure.rows == {str(k): v for k, v in system.nodes[n].structure.rows.items()}
