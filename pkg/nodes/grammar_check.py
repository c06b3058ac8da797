from colorama import Fore, Style

from ..grammarworks.pipeline import check_grammar
from ..grammarworks.diagnostics import has_errors
from ..utils.preset_utils import CUSTOM_PRESET, grammar_source, preset_names


def format_diagnostics(diagnostics):
    return "\n".join(d.format() for d in diagnostics)


class GrammarCheck:
    @classmethod
    def INPUT_TYPES(cls):
        try:
            presets = preset_names()
        except Exception as e:
            print(Fore.RED + f"Failed to load grammar presets: {e}" + Style.RESET_ALL)
            presets = [CUSTOM_PRESET]

        return {
            "required": {
                "preset": (presets, {"tooltip": "Select a bundled or user grammar, or Custom to use the text below."}),
                "grammar_text": ("STRING", {"multiline": True, "default": "", "tooltip": "Grammar used when the preset is Custom."}),
            }
        }

    RETURN_TYPES = ("STRING", "BOOLEAN")
    RETURN_NAMES = ("diagnostics", "accepted")
    OUTPUT_TOOLTIPS = ("Every problem found in the grammar, one per line", "True when the grammar has no errors")
    FUNCTION = "check"
    CATEGORY = "⚡ MNeMiC Nodes"
    DESCRIPTION = "Parses and validates a grammar file and reports its diagnostics."

    def check(self, preset, grammar_text):
        try:
            name, text = grammar_source(preset, grammar_text)
        except ValueError as e:
            print(Fore.RED + str(e) + Style.RESET_ALL)
            return str(e), False
        _, diagnostics = check_grammar(text, f"{name}.mc")
        accepted = not has_errors(diagnostics)
        if not accepted:
            print(Fore.RED + f"Grammar {name} has errors." + Style.RESET_ALL)
        return format_diagnostics(diagnostics), accepted
