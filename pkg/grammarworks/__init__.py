"""Grammar-based language workbench.

One grammar file defines both the concrete syntax of a language and the
classes, attributes and associations of its abstract syntax.
"""
from .diagnostics import Diagnostic, WorkbenchError
from .engine import expand_inheritance, parse_model, validate_instance
from .export import dumps_model, export_model, read_model
from .grammar_frontend import parse_grammar, validate_grammar
from .lexer import build_token_spec, tokenize, transform_ident
from .metamodel import constants_to_members, derive_schema, infer_members
from .model import ModelNode, ModelTree, visit
from .pipeline import Workbench, compile_grammar, process_model
from .resolve import build_symbol_table, check_multiplicities, direct_successors, resolve_links
from .schema_export import export_schema

__version__ = "2.0.0"

__all__ = [
    "Diagnostic",
    "ModelNode",
    "ModelTree",
    "Workbench",
    "WorkbenchError",
    "build_symbol_table",
    "build_token_spec",
    "check_multiplicities",
    "compile_grammar",
    "constants_to_members",
    "derive_schema",
    "direct_successors",
    "dumps_model",
    "expand_inheritance",
    "export_model",
    "export_schema",
    "infer_members",
    "parse_grammar",
    "parse_model",
    "process_model",
    "read_model",
    "resolve_links",
    "tokenize",
    "transform_ident",
    "validate_grammar",
    "validate_instance",
    "visit",
]
