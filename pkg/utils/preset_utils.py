import os

from colorama import Fore, Style

GRAMMAR_EXTENSION = '.mc'
CUSTOM_PRESET = 'Custom'


def grammar_directories():
    """Bundled presets first, then the user directory that overrides them."""
    nodes_directory = os.path.join(os.path.dirname(os.path.dirname(os.path.realpath(__file__))), 'nodes')
    bundled = os.path.join(nodes_directory, 'grammars')
    return [bundled, os.path.join(bundled, 'user')]


def load_grammar_presets(directories):
    presets = {}
    for directory in directories:
        if not os.path.isdir(directory):
            continue
        for filename in sorted(os.listdir(directory)):
            if not filename.endswith(GRAMMAR_EXTENSION):
                continue
            path = os.path.join(directory, filename)
            try:
                with open(path, 'r', encoding='utf-8') as file:
                    presets[os.path.splitext(filename)[0]] = file.read()
            except (OSError, UnicodeDecodeError) as e:
                print(Fore.RED + f"Failed to load grammar preset from {path}: {e}" + Style.RESET_ALL)
    return presets


def preset_names(directories=None):
    presets = load_grammar_presets(directories or grammar_directories())
    return list(presets.keys()) + [CUSTOM_PRESET]


def grammar_source(preset, grammar_text, directories=None):
    """Return ``(name, text)`` of the grammar a node should use."""
    if preset == CUSTOM_PRESET:
        if not grammar_text.strip():
            raise ValueError("No grammar text given for the Custom preset.")
        return CUSTOM_PRESET, grammar_text
    presets = load_grammar_presets(directories or grammar_directories())
    if preset not in presets:
        raise ValueError(f"Unknown grammar preset '{preset}'.")
    return preset, presets[preset]
