import pytest

from conftest import FIXTURES
from grammarworks.config import WorkbenchConfig, load_config
from grammarworks.diagnostics import ConfigError


def test_bundled_defaults():
    assert load_config() == WorkbenchConfig(format="json", indent=2, memoize=True, workers=4, color="auto")


def test_override_file():
    config = load_config(str(FIXTURES / "workbench.ini"))
    assert (config.indent, config.workers, config.memoize) == (4, 2, False)
    assert config.format == "json"


def test_missing_override_warns(tmp_path, capsys):
    config = load_config(str(tmp_path / "absent.ini"))
    assert config == load_config()
    assert "does not exist" in capsys.readouterr().err


@pytest.mark.parametrize("text, fragment", [
    ("[output]\nformat = xmi\n", "format must be one of"),
    ("[output]\nindent = wide\n", "invalid configuration value"),
    ("[output]\nindent = -1\n", "indent must not be negative"),
    ("[parser]\nworkers = 0\n", "workers must be at least 1"),
    ("[parser]\nmemoize = perhaps\n", "invalid configuration value"),
    ("[console]\ncolor = blue\n", "color must be one of"),
    ("format = json\n", "cannot read"),
])
def test_invalid_values(tmp_path, text, fragment):
    path = tmp_path / "bad.ini"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError) as info:
        load_config(str(path))
    assert fragment in info.value.message
