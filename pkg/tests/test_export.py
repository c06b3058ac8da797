import json

import pytest

from conftest import read_fixture
from grammarworks.diagnostics import WorkbenchError
from grammarworks.export import dumps_model, export_model, read_model
from grammarworks.pipeline import process_model


def test_pingpong_document(pingpong):
    doc = pingpong.document
    assert doc["source"] == "pingpong.aut"
    assert doc["grammar"] == "Automaton"
    assert len(doc["nodes"]) == 9
    assert len(doc["links"]) == 8
    assert doc["diagnostics"] == []
    root = doc["nodes"][0]
    assert root == {
        "class": "Automaton",
        "id": 0,
        "attributes": {"name": "PingPong"},
        "children": {"state": [1, 4], "transition": [2, 3, 7, 8]},
    }
    assert doc["nodes"][3]["class"] == "TransitionWithAction"
    assert doc["nodes"][3]["attributes"]["action"] == "doStopGame()"


def test_links_are_sorted(pingpong):
    links = pingpong.document["links"]
    assert links[0] == {"association": "Transition.fromState", "role": "fromState", "sourceId": 2, "targetId": 1}
    keys = [(l["association"], l["sourceId"], l["targetId"]) for l in links]
    assert keys == sorted(keys)
    to_state = [(l["sourceId"], l["targetId"]) for l in links if l["role"] == "toState"]
    assert to_state == [(2, 4), (3, 1), (7, 6), (8, 5)]


def test_output_is_byte_identical(automaton, pingpong):
    again = process_model(automaton, read_fixture("pingpong.aut"), "pingpong.aut")
    assert dumps_model(again.document) == dumps_model(pingpong.document)
    assert dumps_model(pingpong.document).endswith("}\n")


def test_document_is_plain_json(pingpong):
    assert json.loads(dumps_model(pingpong.document, indent=4)) == pingpong.document


def test_read_model_round_trip(pingpong):
    tree, links = read_model(json.loads(dumps_model(pingpong.document)))
    assert export_model(tree)["nodes"] == pingpong.document["nodes"]
    assert links == [(l["association"], l["role"], l["sourceId"], l["targetId"]) for l in pingpong.document["links"]]
    assert tree.source == "pingpong.aut"


def test_empty_automaton(automaton):
    result = process_model(automaton, "automaton A { }", "empty.aut")
    assert len(result.document["nodes"]) == 1
    assert result.document["links"] == []


def test_diagnostics_are_embedded(automaton):
    result = process_model(automaton, read_fixture("broken.aut"), "broken.aut")
    assert result.document["diagnostics"] == [{
        "severity": "error",
        "message": "unresolved reference X",
        "file": "broken.aut",
        "line": 3,
        "column": 3,
    }]


def test_failed_parse_has_no_document(automaton):
    result = process_model(automaton, "automaton {", "bad.aut")
    assert result.document is None
    assert not result.ok
    assert result.diagnostics[0].file == "bad.aut"


@pytest.mark.parametrize("doc", [
    {},
    {"nodes": []},
    {"nodes": [{"class": "A", "id": 0, "attributes": {}, "children": {"b": [5]}}]},
    {"nodes": [{"class": "A", "id": 0, "attributes": {}, "children": {}}],
     "links": [{"association": "A.r", "role": "r", "sourceId": 0, "targetId": 9}]},
])
def test_read_model_rejects_broken_documents(doc):
    with pytest.raises(WorkbenchError):
        read_model(doc)
