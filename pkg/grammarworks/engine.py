"""Executable parser built from a grammar.

``expand_inheritance`` turns ``extends`` and ``implements`` into ordered
choices, ``parse_model`` runs a memoizing ordered-choice parser over a
token list and ``validate_instance`` checks the result against the schema.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

from .diagnostics import NOWHERE, Diagnostic, GrammarError, ModelParseError, TransformError
from .grammar_ast import (
    OPTIONAL,
    PLUS,
    Alternative,
    Constant,
    IdentRef,
    Literal,
    NonterminalRef,
    Repetition,
    Sequence,
    member_name,
    walk_rhs,
)
from .lexer import IDENT, token_end, transform_ident
from .metamodel import LIST, ONE, SYNTAX, AttributeDef, CompositionDef
from .model import ModelNode, ModelTree, visit

END_OF_INPUT = "end of input"


@dataclass(frozen=True)
class NormalizedGrammar:
    start: Optional[str]
    bodies: Mapping = field(default_factory=dict)
    # rule or interface -> names tried, in order, before the rule's own body
    choices: Mapping = field(default_factory=dict)
    interfaces: frozenset = frozenset()

    def alternatives(self, name: str) -> tuple:
        return self.choices.get(name, ())

    def is_interface(self, name: str) -> bool:
        return name in self.interfaces


def expand_inheritance(g) -> NormalizedGrammar:
    subs = {p.name: [] for p in g.productions}
    impls = {i.name: [] for i in g.interfaces}
    for p in g.productions:
        if p.super_rule in subs and p.super_rule != p.name:
            subs[p.super_rule].append(p.name)
        for name in p.interfaces:
            if name in impls:
                impls[name].append(p.name)

    used = {}
    for p in g.productions:
        for node in walk_rhs(p.rhs):
            if isinstance(node, NonterminalRef) and node.target in impls:
                used.setdefault(node.target, node.pos)
    for name, names in impls.items():
        if not names and name in used:
            raise GrammarError(f"interface {name} has no implementing production", used[name])

    choices = {name: tuple(names) for name, names in {**subs, **impls}.items() if names}
    return NormalizedGrammar(
        start=g.productions[0].name if g.productions else None,
        bodies=MappingProxyType({p.name: p.rhs for p in g.productions}),
        choices=MappingProxyType(choices),
        interfaces=frozenset(impls),
    )


@dataclass(frozen=True)
class _Match:
    class_name: str
    # (member, kind, value, position); kind is "value" or "child"
    bindings: tuple
    start: int


class _Parser:
    def __init__(self, ng: NormalizedGrammar, tokens: list, spec=None, memoize: bool = True):
        self.ng = ng
        self.tokens = tokens
        self.spec = spec
        self.memo = {} if memoize else None
        self.active = set()
        self.farthest = -1
        self.expected = set()

    def fail(self, pos: int, expected: str) -> None:
        if pos > self.farthest:
            self.farthest = pos
            self.expected = {expected}
        elif pos == self.farthest:
            self.expected.add(expected)

    def token(self, pos: int):
        return self.tokens[pos] if pos < len(self.tokens) else None

    def call(self, name: str, pos: int):
        key = (name, pos)
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        if key in self.active:
            return None
        self.active.add(key)
        try:
            result = None
            for alternative in self.ng.alternatives(name):
                result = self.call(alternative, pos)
                if result is not None:
                    break
            body = self.ng.bodies.get(name)
            if result is None and body is not None:
                matched = self.match(body, pos)
                if matched is not None:
                    end, bindings = matched
                    result = (end, _Match(name, tuple(bindings), pos))
        finally:
            self.active.discard(key)
        if self.memo is not None:
            self.memo[key] = result
        return result

    def ident_value(self, ident: str, tok):
        if tok is None or tok.category != IDENT:
            return _NO_VALUE
        if tok.kind == ident:
            return tok.value
        compatible = self.spec.ident(ident) if self.spec is not None else None
        if compatible is None or not compatible.fullmatch(tok.lexeme):
            return _NO_VALUE
        try:
            return transform_ident(compatible.transform, tok.lexeme, tok.position)
        except TransformError:
            return _NO_VALUE

    def match(self, node, pos: int):
        if isinstance(node, Literal):
            tok = self.token(pos)
            if tok is not None and tok.category != IDENT and tok.lexeme == node.text:
                return pos + 1, []
            self.fail(pos, repr(node.text))
            return None
        if isinstance(node, IdentRef):
            tok = self.token(pos)
            value = self.ident_value(node.ident, tok)
            if value is _NO_VALUE:
                self.fail(pos, node.ident)
                return None
            return pos + 1, [(member_name(node), "value", value, tok.position)]
        if isinstance(node, Constant):
            tok = self.token(pos)
            if tok is not None and tok.category != IDENT and tok.lexeme in node.literals:
                value = True if len(node.literals) == 1 else tok.lexeme
                return pos + 1, [(node.attr_name, "value", value, tok.position)]
            for lit in node.literals:
                self.fail(pos, repr(lit))
            return None
        if isinstance(node, NonterminalRef):
            found = self.call(node.target, pos)
            if found is None:
                return None
            end, child = found
            return end, [(member_name(node), "child", child, NOWHERE)]
        if isinstance(node, Sequence):
            bindings = []
            for child in node.children:
                matched = self.match(child, pos)
                if matched is None:
                    return None
                pos, found = matched
                bindings.extend(found)
            return pos, bindings
        if isinstance(node, Alternative):
            for branch in node.branches:
                matched = self.match(branch, pos)
                if matched is not None:
                    return matched
            return None
        if isinstance(node, Repetition):
            return self.repeat(node, pos)
        raise TypeError(f"unexpected grammar node {node!r}")

    def repeat(self, node: Repetition, pos: int):
        if node.kind == OPTIONAL:
            matched = self.match(node.child, pos)
            return matched if matched is not None else (pos, [])
        bindings = []
        if node.kind == PLUS:
            first = self.match(node.child, pos)
            if first is None:
                return None
            if first[0] == pos:
                return first
            pos, bindings = first[0], list(first[1])
        while True:
            matched = self.match(node.child, pos)
            # a zero-width iteration would repeat forever
            if matched is None or matched[0] == pos:
                return pos, bindings
            pos = matched[0]
            bindings.extend(matched[1])


_NO_VALUE = object()


class _Builder:
    """Turns raw matches into ModelNodes, numbering them in pre-order."""

    def __init__(self, schema, tokens: list):
        self.schema = schema
        self.tokens = tokens
        self.next_id = 0
        self._members = {}

    def members(self, class_name: str) -> dict:
        if class_name not in self._members:
            self._members[class_name] = self.schema.members(class_name)
        return self._members[class_name]

    def open(self, match: _Match) -> ModelNode:
        members = self.members(match.class_name)
        if match.start < len(self.tokens):
            position = self.tokens[match.start].position
        else:
            position = token_end(self.tokens)
        node = ModelNode(self.next_id, match.class_name, line=position.line, column=position.column)
        self.next_id += 1
        for name, member in members.items():
            if member.origin != SYNTAX:
                continue
            if isinstance(member, CompositionDef):
                node.children[name] = []
            elif member.value_type == "boolean":
                node.attributes[name] = False
            elif member.cardinality == LIST:
                node.attributes[name] = []
            else:
                node.attributes[name] = None
        return node

    def bind(self, node: ModelNode, name: str, value, where) -> None:
        member = self.members(node.class_name).get(name)
        if member is not None and member.cardinality == LIST and isinstance(member, AttributeDef) \
                and member.value_type != "boolean":
            node.attributes.setdefault(name, []).append(value)
        elif node.attributes.get(name) is None or isinstance(value, bool):
            node.attributes[name] = value
        node.attribute_positions.setdefault(name, where)

    def build(self, match: _Match) -> ModelNode:
        root = self.open(match)
        # a child's whole subtree is numbered before the parent's next binding
        stack = [(root, iter(match.bindings))]
        while stack:
            node, bindings = stack[-1]
            for name, kind, value, where in bindings:
                if kind == "child":
                    child = self.open(value)
                    node.children.setdefault(name, []).append(child)
                    stack.append((child, iter(value.bindings)))
                    break
                self.bind(node, name, value, where)
            else:
                stack.pop()
        return root


def _describe(tok) -> str:
    return END_OF_INPUT if tok is None else tok.describe()


def parse_model(schema, ng: NormalizedGrammar, tokens: list, spec=None, start: Optional[str] = None,
                memoize: bool = True, source: str = "") -> ModelTree:
    """Parse ``tokens`` from the start rule; the whole token list must be consumed."""
    start = start or ng.start
    if start is None:
        raise ModelParseError("grammar has no productions", NOWHERE)
    if start not in ng.bodies and start not in ng.choices:
        raise ModelParseError(f"unknown start rule {start}", NOWHERE)
    parser = _Parser(ng, tokens, spec, memoize)
    try:
        result = parser.call(start, 0)
    except RecursionError:
        tok = parser.token(max(parser.farthest, 0))
        raise ModelParseError(
            "model nesting too deep", tok.position if tok is not None else token_end(tokens)
        ) from None
    if result is not None and result[0] == len(tokens):
        return ModelTree(_Builder(schema, tokens).build(result[1]), source)

    at, expected = parser.farthest, set(parser.expected)
    if result is not None:
        end = result[0]
        if end > at:
            at, expected = end, {END_OF_INPUT}
        elif end == at:
            expected.add(END_OF_INPUT)
    at = max(at, 0)
    tok = parser.token(at)
    found = _describe(tok)
    position = tok.position if tok is not None else token_end(tokens)
    raise ModelParseError(
        f"expected {', '.join(sorted(expected))}, found {found}",
        position,
        expected,
        found,
    )


# -- instance validation ------------------------------------------------------


_PYTHON_TYPES = {"string": str, "int": int, "float": float, "boolean": bool}


def _value_ok(schema, member: AttributeDef, value) -> bool:
    if member.value_type == "enum":
        enum = schema.enum_named(member.enum)
        return enum is not None and value in enum.literals
    expected = _PYTHON_TYPES.get(member.value_type, str)
    if expected is int and isinstance(value, bool):
        return False
    if expected is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    return isinstance(value, expected)


def validate_instance(tree: ModelTree, schema) -> list:
    """Check every node of ``tree`` against its class; returns diagnostics."""
    found = []
    for node in visit(tree, "pre"):
        cls = schema.class_named(node.class_name)
        if cls is None:
            found.append(Diagnostic.error(f"unknown class {node.class_name}", node.position))
            continue
        bound = dict(cls.bound)
        for name, member in schema.members(node.class_name).items():
            required = bound.get(name) == ONE and member.origin == SYNTAX
            if isinstance(member, CompositionDef):
                kids = node.children.get(name, [])
                if required and len(kids) != 1:
                    found.append(Diagnostic.error(
                        f"{node.label()} needs exactly one {name}, has {len(kids)}", node.position))
                elif member.cardinality != LIST and len(kids) > 1:
                    found.append(Diagnostic.error(
                        f"{node.label()} has {len(kids)} values for single member {name}", node.position))
                for kid in kids:
                    if not schema.is_subtype(kid.class_name, member.target):
                        found.append(Diagnostic.error(
                            f"{kid.class_name} is not a {member.target} (member {name} of {node.class_name})",
                            kid.position,
                        ))
                continue
            value = node.attributes.get(name)
            where = node.attribute_positions.get(name, node.position)
            if member.cardinality == LIST and member.value_type != "boolean":
                if value is None and not required:
                    continue
                if not isinstance(value, list):
                    found.append(Diagnostic.error(f"{node.label()}: list member {name} holds {value!r}", where))
                    continue
                values = value
            elif value is None:
                if required:
                    found.append(Diagnostic.error(f"{node.label()} is missing required member {name}", where))
                continue
            else:
                values = [value]
            for item in values:
                if not _value_ok(schema, member, item):
                    found.append(Diagnostic.error(
                        f"{node.label()}: value {item!r} of {name} is not a {member.type_name}", where))
    return found
