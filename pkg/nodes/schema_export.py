from colorama import Fore, Style

from ..grammarworks.pipeline import compile_grammar
from ..grammarworks.schema_export import FORMATS, export_schema
from ..utils.preset_utils import CUSTOM_PRESET, grammar_source, preset_names
from .grammar_check import format_diagnostics


class SchemaExport:
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
                "format": (list(FORMATS), {"tooltip": "json for tools, plantuml for a class diagram."}),
            }
        }

    RETURN_TYPES = ("STRING", "BOOLEAN")
    RETURN_NAMES = ("schema", "success")
    OUTPUT_TOOLTIPS = ("The abstract syntax of the grammar, or the diagnostics when it has errors", "True when the schema was derived")
    FUNCTION = "export"
    CATEGORY = "⚡ MNeMiC Nodes"
    DESCRIPTION = "Derives the classes, attributes and associations a grammar defines and exports them."

    def export(self, preset, grammar_text, format="json"):
        try:
            name, text = grammar_source(preset, grammar_text)
        except ValueError as e:
            print(Fore.RED + str(e) + Style.RESET_ALL)
            return str(e), False
        workbench, diagnostics = compile_grammar(text, f"{name}.mc")
        if workbench is None:
            print(Fore.RED + f"Grammar {name} has errors, no schema exported." + Style.RESET_ALL)
            return format_diagnostics(diagnostics), False
        return export_schema(workbench.schema, format), True
