import importlib
import json
import os

import pytest

from conftest import read_fixture


@pytest.fixture(scope="module")
def nodes(node_package):
    return node_package.NODE_CLASS_MAPPINGS


@pytest.fixture(scope="module")
def preset_utils(node_package):
    return importlib.import_module(f"{node_package.__name__}.utils.preset_utils")


@pytest.fixture(scope="module")
def replace_tokens(node_package):
    return importlib.import_module(f"{node_package.__name__}.utils.replace_tokens")


def test_mappings(nodes):
    assert sorted(cls.__name__ for cls in nodes.values()) == ["GrammarCheck", "ModelParse", "SaveTextFile", "SchemaExport"]
    for cls in nodes.values():
        inputs = cls.INPUT_TYPES()
        assert "required" in inputs
        assert len(cls.RETURN_TYPES) == len(cls.RETURN_NAMES) == len(cls.OUTPUT_TOOLTIPS)
        assert callable(getattr(cls(), cls.FUNCTION))
        assert cls.CATEGORY == "⚡ MNeMiC Nodes"


def test_preset_choices(nodes):
    presets, _ = nodes["🧩 Grammar Check"].INPUT_TYPES()["required"]["preset"]
    assert presets[-1] == "Custom"
    assert {"Automaton", "Shop"} <= set(presets)


def test_grammar_check_presets(nodes):
    check = nodes["🧩 Grammar Check"]()
    assert check.check("Automaton", "") == ("", True)
    assert check.check("Shop", "") == ("", True)


def test_grammar_check_custom(nodes):
    diagnostics, accepted = nodes["🧩 Grammar Check"]().check("Custom", "grammar G { A = B; }")
    assert not accepted
    assert diagnostics.startswith("Custom.mc:1:")
    assert diagnostics.endswith("error: undefined nonterminal B")


def test_grammar_check_without_text(nodes):
    diagnostics, accepted = nodes["🧩 Grammar Check"]().check("Custom", "  ")
    assert not accepted
    assert "No grammar text" in diagnostics


def test_unknown_preset(nodes):
    diagnostics, accepted = nodes["🧩 Grammar Check"]().check("Nope", "")
    assert (diagnostics, accepted) == ("Unknown grammar preset 'Nope'.", False)


def test_schema_export(nodes):
    export = nodes["🧩 Grammar Schema Export"]()
    schema, success = export.export("Shop", "", "plantuml")
    assert success
    assert "PremiumClient --|> Client" in schema
    schema, success = export.export("Automaton", "", "json")
    assert success
    assert json.loads(schema)["grammar"] == "Automaton"


def test_schema_export_with_errors(nodes):
    schema, success = nodes["🧩 Grammar Schema Export"]().export("Custom", 'grammar G { A = A "a"; }', "json")
    assert not success
    assert "left recursion on A" in schema


def test_model_parse(nodes):
    model_json, success, diagnostics = nodes["🧩 Parse Model With Grammar"]().parse(
        "Automaton", "", read_fixture("pingpong.aut"), True)
    assert success
    assert diagnostics == ""
    doc = json.loads(model_json)
    assert (len(doc["nodes"]), len(doc["links"])) == (9, 8)


def test_model_parse_reports_problems(nodes):
    parse = nodes["🧩 Parse Model With Grammar"]()
    model_json, success, diagnostics = parse.parse("Automaton", "", read_fixture("broken.aut"), False)
    assert not success
    assert diagnostics == "model:3:3: error: unresolved reference X"
    assert json.loads(model_json)["diagnostics"][0]["line"] == 3
    model_json, success, diagnostics = parse.parse("Automaton", "", "automaton {", True)
    assert (model_json, success) == ("", False)
    assert "expected IDENT" in diagnostics


def test_save_text_file(nodes, tmp_path):
    save = nodes["💾 Save Text File With Path"]()
    first, name = save.save_text_file("{}", "[grammar]/docs", "[grammar]", "_", 3, "json", "Shop", output_root=str(tmp_path))
    assert first == os.path.join(str(tmp_path), "Shop", "docs", "Shop_001.json")
    assert name == "Shop_001"
    second, _ = save.save_text_file("{}", "[grammar]/docs", "[grammar]", "_", 3, ".json", "Shop", output_root=str(tmp_path))
    assert second.endswith("Shop_002.json")
    with open(second, encoding="utf-8") as f:
        assert f.read() == "{}"


def test_save_without_counter(nodes, tmp_path):
    save = nodes["💾 Save Text File With Path"]()
    path, name = save.save_text_file("@startuml\n@enduml\n", "", "diagram", "_", 0, "puml", output_root=str(tmp_path))
    assert path == os.path.join(str(tmp_path), "diagram.puml")
    assert name == "diagram"


@pytest.mark.parametrize("path, text, extension", [
    ("../outside", "x", "json"),
    ("a/../../outside", "x", "json"),
    (os.path.abspath(os.sep), "x", "json"),
    ("docs", "   ", "json"),
    ("docs", "x", " "),
])
def test_save_rejects_bad_input(nodes, tmp_path, path, text, extension):
    with pytest.raises(ValueError):
        nodes["💾 Save Text File With Path"]().save_text_file(
            text, path, "p", "_", 3, extension, output_root=str(tmp_path))


def test_preset_loading(preset_utils, tmp_path):
    (tmp_path / "Mine.mc").write_text('grammar Mine { A = "a"; }', encoding="utf-8")
    (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")
    assert preset_utils.preset_names([str(tmp_path)]) == ["Mine", "Custom"]
    assert preset_utils.grammar_source("Mine", "", [str(tmp_path)]) == ("Mine", 'grammar Mine { A = "a"; }')
    assert preset_utils.grammar_source("Custom", "grammar X { }") == ("Custom", "grammar X { }")


def test_user_preset_overrides_bundled(preset_utils, tmp_path):
    bundled, user = tmp_path / "bundled", tmp_path / "user"
    bundled.mkdir()
    user.mkdir()
    (bundled / "Shop.mc").write_text("bundled", encoding="utf-8")
    (user / "Shop.mc").write_text("user", encoding="utf-8")
    assert preset_utils.load_grammar_presets([str(bundled), str(user), str(tmp_path / "missing")]) == {"Shop": "user"}


def test_replace_tokens(replace_tokens):
    assert replace_tokens.replace_tokens("[grammar]/x", "a/b") == "a_b/x"
    assert replace_tokens.replace_tokens("[grammar]", None) == "[grammar]"
    assert replace_tokens.replace_tokens("[kind]-[time(%Y)]", custom_tokens={"[kind]": "schema"}).startswith("schema-2")
    assert replace_tokens.path_safe("  ") == "_"
