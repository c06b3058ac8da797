import importlib.util
import itertools
import sys
from pathlib import Path

import pytest

from grammarworks.diagnostics import has_errors
from grammarworks.pipeline import compile_grammar, process_model

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
GRAMMARS = ROOT / "nodes" / "grammars"


def read_fixture(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


def read_preset(name):
    return (GRAMMARS / f"{name}.mc").read_text(encoding="utf-8")


def build(text, file="grammar.mc"):
    workbench, diagnostics = compile_grammar(text, file)
    assert workbench is not None, [d.format() for d in diagnostics]
    return workbench


@pytest.fixture(scope="session")
def automaton_text():
    return read_preset("Automaton")


@pytest.fixture(scope="session")
def shop_text():
    return read_preset("Shop")


@pytest.fixture(scope="session")
def automaton(automaton_text):
    return build(automaton_text, "Automaton.mc")


@pytest.fixture(scope="session")
def shop(shop_text):
    return build(shop_text, "Shop.mc")


@pytest.fixture(scope="session")
def pingpong(automaton):
    result = process_model(automaton, read_fixture("pingpong.aut"), "pingpong.aut")
    assert not has_errors(result.diagnostics), [d.format() for d in result.diagnostics]
    return result


@pytest.fixture(scope="session")
def node_package():
    """The node pack loaded as a package, the way ComfyUI imports it."""
    name = "mnemic_grammar_nodes"
    if name in sys.modules:
        return sys.modules[name]
    spec = importlib.util.spec_from_file_location(
        name, ROOT / "__init__.py", submodule_search_locations=[str(ROOT)]
    )
    module = importlib.util.module_from_spec(spec)
    sys.modules[name] = module
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def net():
    return build(read_fixture("hub.mc"), "hub.mc")


@pytest.fixture(scope="session")
def workbenches(automaton, shop, net):
    return {"automaton": automaton, "shop": shop, "net": net}


# Shop models built from every prefix of the clients and orders, in both orders.

CLIENTS = [
    'client Ann "Main St" "Springfield"',
    "premiumclient Bob gold",
    'client Cid "Elm Rd" "Shelbyville"',
]
ORDERS = [
    "creditorder Ann card42",
    "cashorder Bob fifty",
    "creditorder Cid visa",
]


def _shop_models():
    for clients, orders in itertools.product(range(len(CLIENTS) + 1), range(len(ORDERS) + 1)):
        for reverse in (False, True):
            chosen = CLIENTS[:clients] + ORDERS[:orders]
            if reverse:
                chosen = CLIENTS[:clients][::-1] + ORDERS[:orders][::-1]
            yield " ".join(["acme"] + chosen)


SHOP_MODELS = sorted(set(_shop_models()))

MODEL_FIXTURES = {
    "pingpong.aut": "automaton",
    "broken.aut": "automaton",
    "duplicate.aut": "automaton",
    "two_wires.net": "net",
}

# (workbench name, model text) for every model the suite parses successfully
CORPUS = [
    pytest.param("shop", text, id=f"shop-{index}") for index, text in enumerate(SHOP_MODELS)
] + [
    pytest.param(kind, read_fixture(name), id=name) for name, kind in MODEL_FIXTURES.items()
]
