"""Reading and checking grammar files.

The file syntax lives in ``grammar_file.lark``. Transform bodies and ast
methods are host-language code; they are kept as raw text sliced out of
the source by position.
"""
from __future__ import annotations

import os
import re
from dataclasses import replace

from lark import Lark, Transformer, UnexpectedCharacters, UnexpectedInput, v_args
from lark.exceptions import UnexpectedToken, VisitError
from lark.lexer import PatternStr

from .diagnostics import (
    NOWHERE,
    DiagnosticBag,
    DuplicateDeclarationError,
    GrammarSyntaxError,
    Position,
)
from .grammar_ast import (
    OPTIONAL,
    PLUS,
    STAR,
    PREDEFINED_IDENTS,
    Alternative,
    AssociationDecl,
    AstAttribute,
    AstBlock,
    AstMethod,
    Constant,
    GrammarAst,
    IdentDef,
    IdentRef,
    InterfaceDecl,
    Literal,
    Multiplicity,
    MANY,
    NonterminalRef,
    Production,
    ReferenceSpec,
    Repetition,
    Sequence,
    walk_rhs,
)
from .transforms import USER_TRANSFORMS, effective_transform, unescape

_GRAMMAR_FILE = os.path.join(os.path.dirname(__file__), "grammar_file.lark")

with open(_GRAMMAR_FILE, encoding="utf-8") as _f:
    _lark_parser = Lark(
        _f.read(),
        parser="lalr",
        propagate_positions=True,
        maybe_placeholders=False,
    )

_REPEAT = {"STAR": STAR, "PLUS": PLUS, "QMARK": OPTIONAL}

_TERMINAL_NAMES = {
    "$END": "end of input",
    "NAME": "name",
    "INT": "number",
    "STRING": "string literal",
    "CHAR": "character literal",
    "SIGNATURE": "method signature",
    "CODE": "code",
}


def _pos(token) -> Position:
    return Position(token.line, token.column)


def _meta_pos(meta) -> Position:
    if meta.empty:
        return NOWHERE
    return Position(meta.line, meta.column)


def _text(token) -> str:
    """The unescaped contents of a quoted literal token."""
    return unescape(token[1:-1])


def _label(token) -> str:
    if not token[0].islower():
        raise GrammarSyntaxError(f"attribute name {token} must start with a lowercase letter", _pos(token))
    return str(token)


@v_args(meta=True)
class _GrammarBuilder(Transformer):
    """Turns the lark parse tree of a grammar file into a ``GrammarAst``."""

    def __init__(self, text: str):
        super().__init__()
        self.text = text

    def _slice(self, meta) -> str:
        return self.text[meta.start_pos:meta.end_pos]

    # -- file structure

    def start(self, meta, items):
        package = None
        if isinstance(items[0], str):
            package, items = items[0], items[1:]
        (name, pos), declarations = items[0], items[1:]
        parts = {
            IdentDef: [],
            Production: [],
            InterfaceDecl: [],
            AstBlock: [],
            AssociationDecl: [],
            ReferenceSpec: [],
        }
        declared = {}
        for declaration in declarations:
            for item in declaration if isinstance(declaration, list) else [declaration]:
                parts[type(item)].append(item)
                if isinstance(item, (IdentDef, Production, InterfaceDecl)):
                    first = declared.get(item.name)
                    if first is not None:
                        raise DuplicateDeclarationError(
                            f"duplicate declaration of {item.name} (first declared at {first})", item.pos
                        )
                    declared[item.name] = item.pos
        ident_names = {i.name for i in parts[IdentDef]} | {i.name for i in PREDEFINED_IDENTS}
        productions = [replace(p, rhs=_classify(p.rhs, ident_names)) for p in parts[Production]]
        return GrammarAst(
            name=name,
            package=package,
            idents=tuple(parts[IdentDef]),
            productions=tuple(productions),
            interfaces=tuple(parts[InterfaceDecl]),
            ast_blocks=tuple(parts[AstBlock]),
            associations=tuple(parts[AssociationDecl]),
            concepts=tuple(parts[ReferenceSpec]),
            pos=pos,
        )

    def package(self, meta, items):
        return ".".join(str(t) for t in items)

    def grammar_head(self, meta, items):
        return str(items[0]), _meta_pos(meta)

    # -- idents

    def ident_def(self, meta, items):
        name, (regex, nonempty, pattern) = items[0], items[1]
        transform, body, result_type = "string", None, None
        if len(items) > 2:
            transform, body, result_type = items[2]
        return IdentDef(
            name=str(name),
            pattern=pattern,
            regex=regex,
            transform=transform,
            body=body,
            result_type=result_type,
            matches_nonempty=nonempty,
            pos=_pos(name),
        )

    def named_transform(self, meta, items):
        return str(items[0]), None, None

    def opaque_transform(self, meta, items):
        _, result_type, body = items
        return None, body, str(result_type)

    def pattern(self, meta, items):
        if len(items) == 1:
            regex, nonempty = items[0]
        else:
            regex = "(?:" + "|".join(r for r, _ in items) + ")"
            nonempty = any(n for _, n in items)
        return regex, nonempty, self._slice(meta)

    def pattern_seq(self, meta, items):
        return "".join(r for r, _ in items), any(n for _, n in items)

    def pattern_item(self, meta, items):
        regex, nonempty = items[0]
        if len(items) > 1:
            regex = f"(?:{regex}){items[1]}"
        return regex, nonempty

    def char_range(self, meta, items):
        low, high = items
        lo, hi = _text(low), _text(high)
        if len(lo) != 1 or len(hi) != 1:
            raise GrammarSyntaxError("range bounds must be single characters", _pos(low))
        if hi < lo:
            raise GrammarSyntaxError(f"empty character range {lo!r}..{hi!r}", _pos(low))
        return f"[{re.escape(lo)}-{re.escape(hi)}]", True

    def char_literal(self, meta, items):
        value = _text(items[0])
        return re.escape(value), bool(value)

    string_literal = char_literal

    def pattern_group(self, meta, items):
        regex, nonempty, _ = items[0]
        return f"(?:{regex})", nonempty

    # -- productions

    def production(self, meta, items):
        name, rhs = items[0], items[-1]
        super_rule, interfaces = None, ()
        for item in items[1:-1]:
            if isinstance(item, tuple):
                interfaces = item
            else:
                super_rule = item
        return Production(str(name), rhs, super_rule, interfaces, _pos(name))

    def super_rule(self, meta, items):
        return str(items[0])

    def interfaces(self, meta, items):
        return tuple(str(t) for t in items)

    def rhs(self, meta, items):
        if len(items) == 1:
            return items[0]
        return Alternative(tuple(items), _meta_pos(meta))

    def rhs_seq(self, meta, items):
        if len(items) == 1:
            return items[0]
        return Sequence(tuple(items), _meta_pos(meta))

    def rhs_item(self, meta, items):
        if len(items) == 1:
            return items[0]
        return Repetition(items[0], _REPEAT[items[1].type], _meta_pos(meta))

    def repeat(self, meta, items):
        return items[0]

    def group(self, meta, items):
        return items[0]

    def _literal(self, token, marked: bool) -> Literal:
        text = _text(token)
        if not text:
            raise GrammarSyntaxError("empty literal", _pos(token))
        return Literal(text, marked, _pos(token))

    def marked_literal(self, meta, items):
        return self._literal(items[0], marked=True)

    def literal(self, meta, items):
        return self._literal(items[0], marked=False)

    def constant(self, meta, items):
        label, literals = items[0], [_text(t) for t in items[1:]]
        name = _label(label)
        if any(not lit for lit in literals):
            raise GrammarSyntaxError("empty literal", _pos(label))
        return Constant(name, tuple(literals), _pos(label))

    def labelled_ref(self, meta, items):
        label, target = items
        return NonterminalRef(_label(label), str(target), _pos(label))

    def ref(self, meta, items):
        return NonterminalRef(None, str(items[0]), _pos(items[0]))

    # -- other blocks

    def interface_decl(self, meta, items):
        return InterfaceDecl(str(items[0]), _pos(items[0]))

    def ast_block(self, meta, items):
        target, members = items[0], items[1:]
        attributes = tuple(m for m in members if isinstance(m, AstAttribute))
        methods = tuple(m for m in members if isinstance(m, AstMethod))
        return AstBlock(str(target), attributes, methods, _meta_pos(meta))

    def ast_attribute(self, meta, items):
        label, type_name = items[0], items[1]
        cardinality = "one"
        if len(items) > 2:
            cardinality = "optional" if items[2].type == "QMARK" else "list"
        return AstAttribute(_label(label), str(type_name), cardinality, _pos(label))

    def ast_method(self, meta, items):
        signature, body = items
        return AstMethod(signature.strip(), body, _meta_pos(meta))

    def code_block(self, meta, items):
        return self.text[meta.start_pos + 1:meta.end_pos - 1]

    def association_block(self, meta, items):
        return list(items)

    def association(self, meta, items):
        source, role, source_mult, target_mult, target = items[:5]
        target_role, trailing = None, None
        for item in items[5:]:
            if isinstance(item, Multiplicity):
                trailing = item
            else:
                target_role = item
        return AssociationDecl(
            source_class=str(source),
            source_role=str(role),
            source_mult=source_mult,
            target_class=str(target),
            target_mult=target_mult,
            target_role=target_role,
            trailing_mult=trailing,
            pos=_pos(source),
        )

    def role(self, meta, items):
        return str(items[0])

    def many(self, meta, items):
        return MANY

    def exactly(self, meta, items):
        count = int(items[0])
        return Multiplicity(count, count)

    def at_least(self, meta, items):
        return Multiplicity(int(items[0]), None)

    def between(self, meta, items):
        lo, hi = int(items[0]), int(items[1])
        if hi < lo:
            raise GrammarSyntaxError(f"invalid multiplicity {lo}..{hi}", _pos(items[0]))
        return Multiplicity(lo, hi)

    def concept_block(self, meta, items):
        concept, references = str(items[0]), items[1:]
        return [replace(reference, concept=concept) for reference in references]

    def reference(self, meta, items):
        role, source_class, source_attr, target_class, target_attr = items
        return ReferenceSpec(
            str(role), str(source_class), str(source_attr), str(target_class), str(target_attr), pos=_pos(role)
        )


def _classify(node, ident_names: set):
    """Turn references to ident tokens into IdentRefs once every ident is known."""
    if isinstance(node, NonterminalRef):
        if node.target in ident_names:
            return IdentRef(node.attr_name, node.target, node.pos)
        return node
    if isinstance(node, Sequence):
        return replace(node, children=tuple(_classify(c, ident_names) for c in node.children))
    if isinstance(node, Alternative):
        return replace(node, branches=tuple(_classify(b, ident_names) for b in node.branches))
    if isinstance(node, Repetition):
        return replace(node, child=_classify(node.child, ident_names))
    return node


def _describe_terminal(name: str) -> str:
    if name in _TERMINAL_NAMES:
        return _TERMINAL_NAMES[name]
    pattern = _lark_parser.get_terminal(name).pattern
    if isinstance(pattern, PatternStr):
        return repr(pattern.value)
    return name.lower()


def _end_position(text: str) -> Position:
    return Position(text.count("\n") + 1, len(text) - text.rfind("\n"))


def _convert_lark_error(e: UnexpectedInput, text: str) -> GrammarSyntaxError:
    token = getattr(e, "token", None)
    if token is not None and token.type == "$END":
        token = None
    if isinstance(e, UnexpectedCharacters) or token is not None:
        offset = e.pos_in_stream if token is None else token.start_pos
        pos = Position(e.line, e.column) if token is None else _pos(token)
        rest = text[offset:]
        if rest.startswith("/*"):
            return GrammarSyntaxError("unterminated block comment", pos)
        if rest[:1] in ("\"", "'") and (token is None or token.type not in ("STRING", "CHAR")):
            return GrammarSyntaxError("unterminated literal", pos)
    if isinstance(e, UnexpectedCharacters):
        return GrammarSyntaxError(f"unexpected character {e.char!r}", pos)
    expected = {
        _describe_terminal(t)
        for t in getattr(e, "expected", None) or ()
        if t not in _lark_parser.ignore_tokens
    }
    if isinstance(e, UnexpectedToken) and token is not None:
        words = token.value.split()
        found = repr(words[0] if words else token.value)
        return GrammarSyntaxError(f"unexpected {found}", pos, expected)
    return GrammarSyntaxError("unexpected end of input", _end_position(text), expected)


def parse_grammar(text: str) -> GrammarAst:
    try:
        tree = _lark_parser.parse(text)
    except UnexpectedInput as e:
        raise _convert_lark_error(e, text) from e
    try:
        return _GrammarBuilder(text).transform(tree)
    except VisitError as e:
        raise e.orig_exc from e


# -- validation ----------------------------------------------------------


def validate_grammar(g: GrammarAst) -> list:
    """Return every problem found in ``g``; an empty list means it is accepted."""
    bag = DiagnosticBag()
    rules = {p.name: p for p in g.productions}
    interfaces = {i.name: i for i in g.interfaces}
    _check_idents(g, bag)
    _check_references(g, rules, interfaces, bag)
    _check_inheritance(g, rules, interfaces, bag)
    _check_left_recursion(g, rules, interfaces, bag)
    _check_members(g, bag)
    _check_ast_blocks(g, rules, interfaces, bag)
    _check_associations(g, rules, interfaces, bag)
    _check_concepts(g, rules, interfaces, bag)
    return list(bag)


def _check_idents(g, bag) -> None:
    for ident in g.idents:
        if not ident.matches_nonempty:
            bag.error(f"ident {ident.name} pattern matches only the empty string", ident.pos)
        try:
            re.compile(ident.regex)
        except re.error as e:
            bag.error(f"ident {ident.name} pattern is invalid: {e}", ident.pos)
        if ident.is_opaque:
            if effective_transform(ident) is None:
                bag.warning(
                    f"ident {ident.name}: no builtin transform for result type {ident.result_type}, using string",
                    ident.pos,
                )
        elif ident.transform not in USER_TRANSFORMS:
            bag.error(f"unknown transform '{ident.transform}' for ident {ident.name}", ident.pos)


def _check_references(g, rules, interfaces, bag) -> None:
    for p in g.productions:
        for node in walk_rhs(p.rhs):
            if isinstance(node, NonterminalRef) and node.target not in rules and node.target not in interfaces:
                bag.error(f"undefined nonterminal {node.target}", node.pos)
            elif isinstance(node, Constant):
                seen = set()
                for lit in node.literals:
                    if lit in seen:
                        bag.error(f"duplicate literal '{lit}' in constant {node.attr_name}", node.pos)
                    seen.add(lit)


def _implementors(g) -> dict:
    found = {i.name: [] for i in g.interfaces}
    for p in g.productions:
        for name in p.interfaces:
            if name in found:
                found[name].append(p.name)
    return found


def _sub_rules(g) -> dict:
    found = {p.name: [] for p in g.productions}
    for p in g.productions:
        if p.super_rule in found and p.super_rule != p.name:
            found[p.super_rule].append(p.name)
    return found


def _check_inheritance(g, rules, interfaces, bag) -> None:
    for p in g.productions:
        if p.super_rule is not None:
            if p.super_rule == p.name:
                bag.error(f"production {p.name} extends itself", p.pos)
            elif p.super_rule in interfaces:
                bag.error(f"production {p.name} extends interface {p.super_rule}; use implements", p.pos)
            elif p.super_rule not in rules:
                bag.error(f"undefined super-production {p.super_rule}", p.pos)
        for name in p.interfaces:
            if name in rules:
                bag.error(f"production {p.name} implements {name}, which is not an interface", p.pos)
            elif name not in interfaces:
                bag.error(f"undefined interface {name}", p.pos)

    reported = set()
    for p in g.productions:
        chain = [p.name]
        current = rules[p.name].super_rule
        while current in rules and current not in chain:
            chain.append(current)
            current = rules[current].super_rule
        if current == p.name and len(chain) > 1 and frozenset(chain) not in reported:
            reported.add(frozenset(chain))
            bag.error("extends cycle: " + " -> ".join(chain + [p.name]), p.pos)

    used = {}
    for p in g.productions:
        for node in walk_rhs(p.rhs):
            if isinstance(node, NonterminalRef) and node.target in interfaces:
                used.setdefault(node.target, node.pos)
    for name, impls in _implementors(g).items():
        if not impls and name in used:
            bag.error(f"interface {name} has no implementing production", used[name])


def _nullable_rhs(node, nullable: dict) -> bool:
    if isinstance(node, Sequence):
        return all(_nullable_rhs(c, nullable) for c in node.children)
    if isinstance(node, Alternative):
        return any(_nullable_rhs(b, nullable) for b in node.branches)
    if isinstance(node, Repetition):
        return node.kind != PLUS or _nullable_rhs(node.child, nullable)
    if isinstance(node, NonterminalRef):
        return nullable.get(node.target, False)
    return False


def _first_calls(node, nullable: dict) -> set:
    """Nonterminals that can be entered before any token is consumed."""
    if isinstance(node, NonterminalRef):
        return {node.target}
    if isinstance(node, Sequence):
        calls = set()
        for child in node.children:
            calls |= _first_calls(child, nullable)
            if not _nullable_rhs(child, nullable):
                break
        return calls
    if isinstance(node, Alternative):
        calls = set()
        for branch in node.branches:
            calls |= _first_calls(branch, nullable)
        return calls
    if isinstance(node, Repetition):
        return _first_calls(node.child, nullable)
    return set()


def nullable_rules(g) -> dict:
    subs = _sub_rules(g)
    impls = _implementors(g)
    nullable = {name: False for name in list(subs) + list(impls)}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            value = _nullable_rhs(p.rhs, nullable) or any(nullable.get(s, False) for s in subs[p.name])
            if value and not nullable[p.name]:
                nullable[p.name] = changed = True
        for name, names in impls.items():
            if any(nullable.get(n, False) for n in names) and not nullable[name]:
                nullable[name] = changed = True
    return nullable


def left_call_graph(g) -> dict:
    nullable = nullable_rules(g)
    edges = {}
    for name, names in _sub_rules(g).items():
        edges[name] = set(names) | _first_calls(g.production(name).rhs, nullable)
    for name, names in _implementors(g).items():
        edges[name] = set(names)
    return edges


def _check_left_recursion(g, rules, interfaces, bag) -> None:
    edges = left_call_graph(g)
    for p in g.productions:
        seen = set()
        stack = list(edges.get(p.name, ()))
        while stack:
            current = stack.pop()
            if current == p.name:
                bag.error(f"left recursion on {p.name}", p.pos)
                break
            if current in seen or current not in edges:
                continue
            seen.add(current)
            stack.extend(edges[current])


def _check_members(g, bag) -> None:
    from .metamodel import infer_members

    for p in g.productions:
        infer_members(p, g, bag.items)


def _check_ast_blocks(g, rules, interfaces, bag) -> None:
    for block in g.ast_blocks:
        if block.target not in rules and block.target not in interfaces:
            bag.error(f"ast block for undefined class or interface {block.target}", block.pos)
        for attr in block.attributes:
            if g.ident(attr.type_name) is None and attr.type_name not in rules and attr.type_name not in interfaces:
                bag.error(f"undefined type {attr.type_name} in ast block for {block.target}", attr.pos)


def _check_associations(g, rules, interfaces, bag) -> None:
    owned = {}
    for decl in g.associations:
        for cls in (decl.source_class, decl.target_class):
            if cls not in rules and cls not in interfaces:
                bag.error(f"association names unknown class {cls}", decl.pos)
        for cls, role in ((decl.source_class, decl.source_role), (decl.target_class, decl.opposite_role)):
            if (cls, role) in owned:
                bag.error(f"role {role} is declared twice for {cls}", decl.pos)
            owned[(cls, role)] = decl.pos
        if decl.trailing_mult is not None and decl.trailing_mult != decl.source_mult:
            bag.warning(
                f"trailing multiplicity {decl.trailing_mult} of {decl.target_class}.{decl.opposite_role} "
                f"overrides {decl.source_mult}",
                decl.pos,
            )


def _string_attributes(g) -> dict:
    """Class name -> names of string-typed attributes, inherited ones included."""
    from .metamodel import infer_members
    from .transforms import value_type

    own = {}
    for p in g.productions:
        members = infer_members(p, g, [])
        own[p.name] = {a.name for a in members.attributes if a.value_type == "string"}
    for block in g.ast_blocks:
        for attr in block.attributes:
            ident = g.ident(attr.type_name)
            if ident is not None and value_type(ident) == "string":
                own.setdefault(block.target, set()).add(attr.name)
    result = {}
    for p in g.productions:
        names = set()
        seen = set()
        current = p
        while current is not None and current.name not in seen:
            seen.add(current.name)
            names |= own.get(current.name, set())
            for iface in current.interfaces:
                names |= own.get(iface, set())
            current = g.production(current.super_rule) if current.super_rule else None
        result[p.name] = names
    for i in g.interfaces:
        result[i.name] = own.get(i.name, set())
    return result


def _check_concepts(g, rules, interfaces, bag) -> None:
    from .resolve import RESOLVERS

    strings = _string_attributes(g)
    roles = set()
    for decl in g.associations:
        roles.add(decl.source_role)
        roles.add(decl.opposite_role)
    seen = set()
    for spec in g.concepts:
        if spec.concept not in RESOLVERS:
            bag.error(f"unsupported concept '{spec.concept}'", spec.pos)
        if spec.role in seen:
            bag.error(f"role {spec.role} is resolved twice", spec.pos)
        seen.add(spec.role)
        if spec.role not in roles:
            bag.error(f"concept role {spec.role} names no association role", spec.pos)
        for cls, attr in ((spec.source_class, spec.source_attr), (spec.target_class, spec.target_attr)):
            if cls not in rules and cls not in interfaces:
                bag.error(f"reference path names unknown class {cls}", spec.pos)
            elif attr not in strings.get(cls, set()):
                bag.error(f"{cls}.{attr} is not a string attribute", spec.pos)

