from .nodes.grammar_check import GrammarCheck
from .nodes.schema_export import SchemaExport
from .nodes.model_parse import ModelParse
from .nodes.save_text_file import SaveTextFile


NODE_CLASS_MAPPINGS = {
    "🧩 Grammar Check": GrammarCheck,
    "🧩 Grammar Schema Export": SchemaExport,
    "🧩 Parse Model With Grammar": ModelParse,
    "💾 Save Text File With Path": SaveTextFile,
}

print("\033[34mMNeMiC Grammar Nodes: \033[92mLoaded\033[0m")
