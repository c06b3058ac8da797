"""Grammar and model processing shared by the command line and the nodes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import WorkbenchError, has_errors
from .engine import NormalizedGrammar, expand_inheritance, parse_model, validate_instance
from .export import export_model
from .grammar_ast import GrammarAst
from .grammar_frontend import parse_grammar, validate_grammar
from .lexer import TokenSpec, build_token_spec, tokenize
from .metamodel import Schema, derive_schema
from .model import ModelTree
from .resolve import LinkTable, build_symbol_table, check_multiplicities, resolve_links


@dataclass(frozen=True)
class Workbench:
    """Everything derived from one accepted grammar."""

    grammar: GrammarAst
    schema: Schema
    token_spec: TokenSpec
    normalized: NormalizedGrammar
    diagnostics: tuple = ()


@dataclass
class ModelResult:
    source: str
    tree: Optional[ModelTree] = None
    links: Optional[LinkTable] = None
    document: Optional[dict] = None
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


def _checked(text: str, file: str):
    try:
        grammar = parse_grammar(text)
    except WorkbenchError as e:
        return None, None, [e.to_diagnostic(file)]
    diagnostics = validate_grammar(grammar)
    schema = None
    if not has_errors(diagnostics):
        schema = derive_schema(grammar)
        diagnostics.extend(schema.diagnostics)
    return grammar, schema, [d.with_file(file) for d in diagnostics]


def check_grammar(text: str, file: str = ""):
    """Parse and validate a grammar; returns ``(grammar or None, diagnostics)``."""
    grammar, _, diagnostics = _checked(text, file)
    return grammar, diagnostics


def compile_grammar(text: str, file: str = ""):
    """Build a Workbench from grammar text; returns ``(workbench or None, diagnostics)``."""
    grammar, schema, diagnostics = _checked(text, file)
    if schema is None or has_errors(diagnostics):
        return None, diagnostics
    try:
        workbench = Workbench(
            grammar=grammar,
            schema=schema,
            token_spec=build_token_spec(grammar),
            normalized=expand_inheritance(grammar),
            diagnostics=tuple(diagnostics),
        )
    except WorkbenchError as e:
        return None, diagnostics + [e.to_diagnostic(file)]
    return workbench, diagnostics


def process_model(workbench: Workbench, text: str, source: str = "", memoize: bool = True,
                  start: Optional[str] = None) -> ModelResult:
    """Tokenize, parse, validate, resolve and export one model text."""
    result = ModelResult(source)
    schema = workbench.schema
    try:
        tokens = tokenize(workbench.token_spec, text)
        result.tree = parse_model(
            schema, workbench.normalized, tokens, spec=workbench.token_spec,
            start=start, memoize=memoize, source=source,
        )
    except WorkbenchError as e:
        result.diagnostics.append(e.to_diagnostic(source))
        return result

    found = validate_instance(result.tree, schema)
    table, symbol_diagnostics = build_symbol_table(result.tree, schema.ref_specs, schema)
    found.extend(symbol_diagnostics)
    result.links, link_diagnostics = resolve_links(result.tree, schema, table)
    found.extend(link_diagnostics)
    found.extend(check_multiplicities(result.links, schema))
    result.diagnostics = [d.with_file(source) for d in found]
    result.document = export_model(result.tree, result.links, result.diagnostics, grammar=schema.grammar_name)
    return result
