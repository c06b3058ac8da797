from .grammar_check import GrammarCheck
from .schema_export import SchemaExport
from .model_parse import ModelParse
from .save_text_file import SaveTextFile

__all__ = [
    "GrammarCheck",
    "SchemaExport",
    "ModelParse",
    "SaveTextFile",
]
