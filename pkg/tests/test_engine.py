import pytest

from conftest import CORPUS, SHOP_MODELS, build, read_fixture
from grammarworks.diagnostics import GrammarError, ModelParseError
from grammarworks.engine import expand_inheritance, parse_model, validate_instance
from grammarworks.grammar_frontend import parse_grammar
from grammarworks.lexer import tokenize
from grammarworks.model import ModelNode, ModelTree, visit


def parse(workbench, text, **kwargs):
    tokens = tokenize(workbench.token_spec, text)
    return parse_model(workbench.schema, workbench.normalized, tokens, spec=workbench.token_spec, **kwargs)


def summary(node):
    return node.class_name, node.attributes.get("name") or node.attributes.get("from")


def test_pingpong_tree(automaton):
    tree = parse(automaton, read_fixture("pingpong.aut"))
    root = tree.root
    assert root.class_name == "Automaton"
    assert root.attributes == {"name": "PingPong"}
    assert [summary(n) for n in root.children["state"]] == [("State", "NoGame"), ("State", "InPlay")]
    assert [summary(n) for n in root.children["transition"]] == [
        ("Transition", "NoGame"),
        ("TransitionWithAction", "InPlay"),
        ("Transition", "Ping"),
        ("Transition", "Pong"),
    ]
    in_play = root.children["state"][1]
    assert [summary(n) for n in in_play.children["state"]] == [("State", "Ping"), ("State", "Pong")]
    assert len(tree) == 9


def test_node_values(automaton):
    tree = parse(automaton, read_fixture("pingpong.aut"))
    nodes = tree.nodes()
    no_game, action = nodes[1], nodes[3]
    assert no_game.attributes == {"name": "NoGame", "initial": True, "final": False}
    assert (no_game.line, no_game.column) == (2, 3)
    assert action.attributes == {"from": "InPlay", "event": "stopGame", "to": "NoGame", "action": "doStopGame()"}


def test_ids_follow_textual_order(automaton):
    tree = parse(automaton, read_fixture("pingpong.aut"))
    assert [n.node_id for n in visit(tree, "pre")] == list(range(9))
    assert [summary(n)[1] for n in tree.nodes()] == [
        "PingPong", "NoGame", "NoGame", "InPlay", "InPlay", "Ping", "Pong", "Ping", "Pong",
    ]


def test_post_order(automaton):
    tree = parse(automaton, read_fixture("pingpong.aut"))
    assert [n.node_id for n in visit(tree, "post")] == [1, 2, 3, 5, 6, 4, 7, 8, 0]
    assert [n.node_id for n in visit(tree.root.children["state"][1], "post")] == [5, 6, 4]


def test_unknown_traversal_order(automaton):
    tree = parse(automaton, "automaton A { }")
    with pytest.raises(ValueError):
        visit(tree, "in")


def test_empty_automaton(automaton):
    tree = parse(automaton, "automaton A { }")
    assert len(tree) == 1
    assert tree.root.children == {"state": [], "transition": []}


def test_start_rule_override(shop):
    tree = parse(shop, 'client Ann "Main St" "Springfield"', start="Client")
    assert tree.root.class_name == "Client"
    address = tree.root.children["address"][0]
    assert address.attributes == {"street": "Main St", "town": "Springfield"}


def test_expected_token_is_reported(shop):
    with pytest.raises(ModelParseError) as info:
        parse(shop, 'client "Bob"', start="Client")
    assert info.value.message.startswith("expected IDENT, found STRING")
    assert (info.value.line, info.value.column) == (1, 8)


def test_trailing_input(automaton):
    with pytest.raises(ModelParseError) as info:
        parse(automaton, "automaton A { } }")
    assert info.value.message == "expected end of input, found '}'"
    assert (info.value.line, info.value.column) == (1, 17)


def test_premature_end(automaton):
    with pytest.raises(ModelParseError) as info:
        parse(automaton, "automaton A {")
    assert info.value.message.endswith("found end of input")
    assert "'}'" in info.value.message
    assert (info.value.line, info.value.column) == (1, 14)


def test_unknown_start_rule(automaton):
    with pytest.raises(ModelParseError, match="unknown start rule Nope"):
        parse(automaton, "automaton A { }", start="Nope")


@pytest.mark.parametrize("kind, text", CORPUS)
def test_memo_does_not_change_the_result(workbenches, kind, text):
    workbench = workbenches[kind]
    with_memo = parse(workbench, text, memoize=True)
    without_memo = parse(workbench, text, memoize=False)
    assert with_memo.root.snapshot() == without_memo.root.snapshot()
    assert [n.node_id for n in visit(with_memo)] == [n.node_id for n in visit(without_memo)]


def nested_states(depth):
    opening = "".join(f"state S{i} {{ " for i in range(depth))
    return "automaton A { " + opening + "state Leaf;" + " }" * depth + " }"


def test_deeply_nested_states(automaton):
    tree = parse(automaton, nested_states(60))
    assert len(tree) == 62
    assert [n.node_id for n in visit(tree, "pre")] == list(range(62))
    assert visit(tree, "post")[0].attributes["name"] == "Leaf"


def test_nesting_beyond_the_stack_is_a_parse_error(automaton):
    with pytest.raises(ModelParseError) as info:
        parse(automaton, nested_states(5000))
    assert info.value.message == "model nesting too deep"
    assert info.value.line == 1


def test_inheritance_chain():
    g = parse_grammar('grammar G { Top = A*; A = "a"; B extends A = "b"; C extends B = "c"; }')
    ng = expand_inheritance(g)
    assert ng.alternatives("A") == ("B",)
    assert ng.alternatives("B") == ("C",)
    assert ng.alternatives("C") == ()
    workbench = build('grammar G { Top = A*; A = "a"; B extends A = "b"; C extends B = "c"; }')
    tree = parse(workbench, "a b c c")
    assert [n.class_name for n in tree.root.children["a"]] == ["A", "B", "C", "C"]


def test_interface_choices(shop):
    assert set(shop.normalized.alternatives("Order")) == {"OrderCreditcard", "OrderCash"}
    assert shop.normalized.is_interface("Order")
    assert not shop.normalized.is_interface("Client")


def test_interface_without_implementor_is_rejected():
    with pytest.raises(GrammarError, match="interface I has no implementing production"):
        expand_inheritance(parse_grammar("grammar G { A = I*; interface I; }"))


def test_validate_parsed_models(automaton, shop):
    assert validate_instance(parse(automaton, read_fixture("pingpong.aut")), automaton.schema) == []
    tree = parse(shop, 'acme premiumclient Bob gold creditorder Bob card42')
    assert validate_instance(tree, shop.schema) == []


def test_validate_flags_bad_nodes(automaton):
    state = ModelNode(1, "State", attributes={"name": None, "initial": False, "final": False}, children={"state": []})
    bad = ModelNode(2, "State", attributes={"name": 5, "initial": False, "final": False}, children={"state": []})
    root = ModelNode(0, "Automaton", attributes={"name": "A"}, children={"state": [state, bad], "transition": []})
    messages = [d.message for d in validate_instance(ModelTree(root), automaton.schema)]
    assert messages == [
        "State is missing required member name",
        "State: value 5 of name is not a string",
    ]


def test_validate_unknown_class(automaton):
    messages = [d.message for d in validate_instance(ModelTree(ModelNode(0, "Nope")), automaton.schema)]
    assert messages == ["unknown class Nope"]


# The same shop models parsed with extends/implements and with the hand-written alternatives.


def _flatten(tree):
    found = []
    for node in visit(tree, "pre"):
        values = {k: v for k, v in node.attributes.items() if v not in (None, [], False)}
        if values:
            found.append((node.class_name, values))
    return found


def test_corpus_is_large_enough():
    assert len(SHOP_MODELS) >= 20


@pytest.mark.parametrize("model", SHOP_MODELS)
def test_inheritance_equals_hand_written_alternatives(shop, model):
    ebnf = build(read_fixture("shop_ebnf.mc"), "shop_ebnf.mc")
    assert _flatten(parse(shop, model)) == _flatten(parse(ebnf, model))


@pytest.mark.parametrize("model, expected", [
    ("registry", []),
    ("registry client a;", [("client", "a", False)]),
    ("registry premiumclient b vip gold;", [("premiumclient", "b", True)]),
    ("registry client a; client b vip gold;", [("client", "a", False), ("client", "b", True)]),
    ("registry premiumclient x; client y; premiumclient z vip gold;", [
        ("premiumclient", "x", False), ("client", "y", False), ("premiumclient", "z", True),
    ]),
])
def test_constant_values(model, expected):
    workbench = build(read_fixture("constants.mc"), "constants.mc")
    tree = parse(workbench, model)
    entries = tree.root.children["entry"]
    assert [(e.attributes["kind"], e.attributes["name"], e.attributes["vip"]) for e in entries] == expected
    assert validate_instance(tree, workbench.schema) == []


def test_compatible_ident_tokens():
    workbench = build(read_fixture("idents.mc"), "idents.mc")
    star = parse(workbench, "spec x 12 *").root
    assert (star.attributes["count"], star.attributes["card"]) == (12, -1)
    plain = parse(workbench, "spec x 12 7").root
    assert (plain.attributes["count"], plain.attributes["card"]) == (12, 7)


@pytest.mark.parametrize("model", [
    "acme cashorder Ann fifty client Bob \"a\" \"b\"",
    "acme premiumclient Bob",
    "acme client Ann \"a\"",
    "client Ann \"a\" \"b\"",
    "acme creditorder Ann",
])
def test_both_shop_grammars_reject(shop, model):
    ebnf = build(read_fixture("shop_ebnf.mc"), "shop_ebnf.mc")
    for workbench in (shop, ebnf):
        with pytest.raises(ModelParseError):
            parse(workbench, model)
