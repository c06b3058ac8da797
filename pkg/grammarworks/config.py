import configparser
import os
import sys
from dataclasses import dataclass

from colorama import Fore, Style

from .diagnostics import ConfigError

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "WorkbenchConfig.ini")

FORMATS = ("json", "plantuml")
COLOR_MODES = ("auto", "always", "never")


@dataclass(frozen=True)
class WorkbenchConfig:
    format: str = "json"
    indent: int = 2
    memoize: bool = True
    workers: int = 4
    color: str = "auto"


def load_config(filepath=None):
    """Read the bundled defaults, then ``filepath`` on top of them when it exists."""
    config = configparser.ConfigParser()
    config.read(DEFAULT_CONFIG_PATH, encoding="utf-8")
    if filepath:
        if not os.path.exists(filepath):
            print(f"{Fore.YELLOW}Configuration file {filepath} does not exist.{Style.RESET_ALL}", file=sys.stderr)
        else:
            try:
                config.read(filepath, encoding="utf-8")
            except configparser.Error as e:
                raise ConfigError(f"cannot read {filepath}: {e}") from None

    try:
        settings = WorkbenchConfig(
            format=config.get("output", "format", fallback="json").strip(),
            indent=config.getint("output", "indent", fallback=2),
            memoize=config.getboolean("parser", "memoize", fallback=True),
            workers=config.getint("parser", "workers", fallback=4),
            color=config.get("console", "color", fallback="auto").strip(),
        )
    except ValueError as e:
        raise ConfigError(f"invalid configuration value: {e}") from None

    if settings.format not in FORMATS:
        raise ConfigError(f"[output] format must be one of {', '.join(FORMATS)}, got '{settings.format}'")
    if settings.color not in COLOR_MODES:
        raise ConfigError(f"[console] color must be one of {', '.join(COLOR_MODES)}, got '{settings.color}'")
    if settings.workers < 1:
        raise ConfigError(f"[parser] workers must be at least 1, got {settings.workers}")
    if settings.indent < 0:
        raise ConfigError(f"[output] indent must not be negative, got {settings.indent}")
    return settings
