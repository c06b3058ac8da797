from colorama import Fore, Style

from ..grammarworks.export import dumps_model
from ..grammarworks.pipeline import compile_grammar, process_model
from ..utils.preset_utils import CUSTOM_PRESET, grammar_source, preset_names
from .grammar_check import format_diagnostics


class ModelParse:
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
                "model_text": ("STRING", {"multiline": True, "default": "", "tooltip": "The model written in the language the grammar defines."}),
                "memoize": ("BOOLEAN", {"default": True, "tooltip": "Cache intermediate parse results.\n\nTurning this off gives the same tree, only slower."}),
            }
        }

    RETURN_TYPES = ("STRING", "BOOLEAN", "STRING")
    RETURN_NAMES = ("model_json", "success", "diagnostics")
    OUTPUT_TOOLTIPS = (
        "The parsed model with its resolved links as JSON",
        "True when no errors were found",
        "Every problem found, one per line",
    )
    FUNCTION = "parse"
    CATEGORY = "⚡ MNeMiC Nodes"
    DESCRIPTION = "Parses a model with a grammar, resolves its references and exports the linked model as JSON."

    def parse(self, preset, grammar_text, model_text, memoize=True):
        try:
            name, text = grammar_source(preset, grammar_text)
        except ValueError as e:
            print(Fore.RED + str(e) + Style.RESET_ALL)
            return "", False, str(e)
        workbench, diagnostics = compile_grammar(text, f"{name}.mc")
        if workbench is None:
            print(Fore.RED + f"Grammar {name} has errors, model not parsed." + Style.RESET_ALL)
            return "", False, format_diagnostics(diagnostics)

        result = process_model(workbench, model_text, "model", memoize)
        model_json = dumps_model(result.document) if result.document is not None else ""
        if not result.ok:
            print(Fore.RED + f"Model has {len(result.diagnostics)} diagnostic(s)." + Style.RESET_ALL)
        return model_json, result.ok, format_diagnostics(list(diagnostics) + result.diagnostics)
