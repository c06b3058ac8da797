from collections import Counter

import pytest

from conftest import CORPUS, build, read_fixture
from grammarworks.diagnostics import UnknownRoleError
from grammarworks.pipeline import process_model
from grammarworks.resolve import (
    RESOLVERS,
    ReferenceResolver,
    SimpleReferenceResolver,
    build_symbol_table,
    check_multiplicities,
    direct_successors,
    resolve_links,
)


def by_name(tree):
    return {n.attributes.get("name"): n for n in tree.nodes() if n.class_name == "State"}


def test_symbol_table(automaton, pingpong):
    table, diagnostics = build_symbol_table(pingpong.tree, automaton.schema.ref_specs, automaton.schema)
    assert diagnostics == []
    assert list(table.table("fromState")) == ["NoGame", "InPlay", "Ping", "Pong"]
    assert table.resolvers["fromState"] is table.resolvers["toState"]
    assert table.lookup("toState", "Ping") is by_name(pingpong.tree)["Ping"]
    assert table.lookup("toState", "Nowhere") is None
    assert table.table("noSuchRole") == {}


def test_links_of_pingpong(pingpong):
    links = pingpong.links
    assert len(links) == 8
    states = by_name(pingpong.tree)
    transitions = [n for n in pingpong.tree.nodes() if n.class_name.startswith("Transition")]
    assert [links.links(t, "fromState")[0].attributes["name"] for t in transitions] == [
        "NoGame", "InPlay", "Ping", "Pong",
    ]
    assert [links.links(t, "toState")[0].attributes["name"] for t in transitions] == [
        "InPlay", "NoGame", "Pong", "Ping",
    ]
    assert links.links(states["Ping"], "outgoingTransitions") == (transitions[2],)
    assert links.links(states["NoGame"], "incomingTransitions") == (transitions[1],)


def test_direct_successors(pingpong):
    states = by_name(pingpong.tree)
    assert direct_successors(states["Ping"], "outgoingTransitions", "toState", pingpong.links) == {states["Pong"]}
    assert direct_successors(states["NoGame"], "outgoingTransitions", "toState", pingpong.links) == {
        states["InPlay"]
    }


@pytest.mark.parametrize("kind, text", CORPUS)
def test_both_ends_agree(workbenches, kind, text):
    workbench = workbenches[kind]
    links = process_model(workbench, text, "corpus").links
    for assoc in workbench.schema.associations:
        entry = links.entries[assoc.name]
        forward = {(s, t) for s, targets in entry.forward.items() for t in targets}
        opposite = {(s, t) for t, sources in entry.opposite.items() for s in sources}
        assert forward == opposite
        assert sum(map(len, entry.forward.values())) == sum(map(len, entry.opposite.values()))


def test_link_counts_balance(pingpong):
    states = by_name(pingpong.tree).values()
    assert sum(len(pingpong.links.links(s, "outgoingTransitions")) for s in states) == 4
    assert sum(len(pingpong.links.links(s, "incomingTransitions")) for s in states) == 4
    per_association = Counter(name for name, _, _ in pingpong.links.pairs())
    assert per_association == {"Transition.fromState": 4, "Transition.toState": 4}


def test_unknown_role(pingpong):
    node = pingpong.tree.root
    with pytest.raises(UnknownRoleError):
        pingpong.links.links(node, "fromState")
    with pytest.raises(UnknownRoleError):
        direct_successors(node, "nope", "toState", pingpong.links)


def test_unresolved_reference(automaton):
    result = process_model(automaton, read_fixture("broken.aut"), "broken.aut")
    assert [(d.message, d.line, d.column) for d in result.diagnostics] == [("unresolved reference X", 3, 3)]
    assert len(result.links) == 1


def test_duplicate_definition_fails_closed(automaton):
    result = process_model(automaton, read_fixture("duplicate.aut"), "duplicate.aut")
    assert [(d.message, d.line, d.column) for d in result.diagnostics] == [
        ("duplicate definition S (first defined at 2:9)", 3, 9),
    ]
    assert len(result.links) == 0


def test_multiplicity_violation(net):
    result = process_model(net, read_fixture("two_wires.net"), "two_wires.net")
    assert [(d.message, d.line, d.column) for d in result.diagnostics] == [
        ("Hub Core has 2 wires link(s), expected 3..4", 2, 3),
    ]


def test_unbounded_multiplicity_accepts_any_count():
    net = build(read_fixture("hub.mc").replace("3..4", "*"), "hub.mc")
    result = process_model(net, read_fixture("two_wires.net"), "two_wires.net")
    assert result.diagnostics == []
    assert len(result.links) == 2


def test_resolution_is_idempotent(automaton, pingpong):
    schema = automaton.schema
    table, _ = build_symbol_table(pingpong.tree, schema.ref_specs, schema)
    first, first_diagnostics = resolve_links(pingpong.tree, schema, table)
    second, second_diagnostics = resolve_links(pingpong.tree, schema, table)
    assert first == second
    assert first == pingpong.links
    assert first_diagnostics == second_diagnostics == []
    assert check_multiplicities(first, schema) == []


def test_resolver_registry():
    assert RESOLVERS == {"simplereference": SimpleReferenceResolver}
    with pytest.raises(NotImplementedError):
        ReferenceResolver(None).lookup("x")


def test_model_without_transitions(automaton):
    result = process_model(automaton, "automaton A { state S; }", "single.aut")
    assert result.diagnostics == []
    assert len(result.links) == 0
    state = result.tree.root.children["state"][0]
    assert direct_successors(state, "outgoingTransitions", "toState", result.links) == set()


def test_empty_automaton_has_empty_table(automaton):
    result = process_model(automaton, "automaton A { }", "empty.aut")
    table, diagnostics = build_symbol_table(result.tree, automaton.schema.ref_specs, automaton.schema)
    assert table.table("fromState") == {}
    assert diagnostics == []
