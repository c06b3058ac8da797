"""Abstract syntax derived from a grammar.

Every production becomes a class, every interface declaration an interface,
and the members of a class are read off the production's right-hand side.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .diagnostics import NOWHERE, Diagnostic, Position
from .grammar_ast import (
    OPTIONAL,
    PLUS,
    STAR,
    Alternative,
    Constant,
    IdentRef,
    Literal,
    Multiplicity,
    NonterminalRef,
    Repetition,
    Sequence,
    member_name,
    walk_rhs,
)
from .transforms import value_type

ONE = "one"
OPTIONAL_CARD = "optional"
LIST = "list"

SYNTAX = "syntax"
AST = "ast"

# occurrence counts saturate here; two already means "list"
_CAP = 2


@dataclass(frozen=True)
class AttributeDef:
    name: str
    value_type: str  # string, int, float, boolean or enum
    cardinality: str = ONE
    enum: Optional[str] = None
    origin: str = SYNTAX
    pos: Position = field(default=NOWHERE, compare=False)

    @property
    def type_name(self) -> str:
        return self.enum if self.value_type == "enum" else self.value_type


@dataclass(frozen=True)
class CompositionDef:
    name: str
    target: str
    cardinality: str = ONE
    origin: str = SYNTAX
    pos: Position = field(default=NOWHERE, compare=False)

    @property
    def type_name(self) -> str:
        return self.target


Member = Union[AttributeDef, CompositionDef]


@dataclass(frozen=True)
class EnumDef:
    name: str
    literals: tuple


@dataclass(frozen=True)
class MethodDef:
    signature: str
    body: str


@dataclass(frozen=True)
class ClassDef:
    name: str
    super_class: Optional[str] = None
    interfaces: tuple = ()
    attributes: tuple = ()
    compositions: tuple = ()
    methods: tuple = ()
    # (member name, cardinality) for everything the production body itself binds
    bound: tuple = ()
    pos: Position = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class InterfaceDef:
    name: str
    attributes: tuple = ()
    compositions: tuple = ()
    methods: tuple = ()
    pos: Position = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class AssociationEnd:
    class_name: str
    role: str
    multiplicity: Multiplicity


@dataclass(frozen=True)
class AssociationDef:
    forward: AssociationEnd
    opposite: AssociationEnd
    pos: Position = field(default=NOWHERE, compare=False)

    @property
    def name(self) -> str:
        return f"{self.forward.class_name}.{self.forward.role}"


@dataclass(frozen=True)
class Members:
    attributes: tuple
    compositions: tuple
    enums: tuple = ()


@dataclass(frozen=True)
class Schema:
    grammar_name: str
    package: Optional[str] = None
    start: Optional[str] = None
    classes: tuple = ()
    interfaces: tuple = ()
    enums: tuple = ()
    associations: tuple = ()
    ref_specs: tuple = ()
    diagnostics: tuple = field(default=(), compare=False)

    def class_named(self, name: str) -> Optional[ClassDef]:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def interface_named(self, name: str) -> Optional[InterfaceDef]:
        for i in self.interfaces:
            if i.name == name:
                return i
        return None

    def enum_named(self, name: str) -> Optional[EnumDef]:
        for e in self.enums:
            if e.name == name:
                return e
        return None

    def supertypes(self, name: str) -> list:
        """``name`` followed by its superclasses and every interface they implement."""
        found = []
        pending = [name]
        while pending:
            current = pending.pop(0)
            if current in found:
                continue
            found.append(current)
            cls = self.class_named(current)
            if cls is not None:
                if cls.super_class:
                    pending.append(cls.super_class)
                pending.extend(cls.interfaces)
        return found

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sup in self.supertypes(sub)

    def members(self, name: str) -> dict:
        """Effective members of a class or interface, inherited ones first."""
        cls = self.class_named(name)
        if cls is None:
            iface = self.interface_named(name)
            if iface is None:
                return {}
            return {m.name: m for m in iface.attributes + iface.compositions}
        chain = []
        current = cls
        while current is not None and current not in chain:
            chain.append(current)
            current = self.class_named(current.super_class) if current.super_class else None
        result = {}
        for c in reversed(chain):
            for m in c.attributes + c.compositions:
                result.setdefault(m.name, m)
        for c in chain:
            for iface_name in c.interfaces:
                iface = self.interface_named(iface_name)
                if iface is not None:
                    for m in iface.attributes + iface.compositions:
                        result.setdefault(m.name, m)
        return result

    def association_for_role(self, class_name: str, role: str):
        """Return ``(association, "forward" | "opposite")`` for a role owned by ``class_name``."""
        for assoc in self.associations:
            if assoc.forward.role == role and self.is_subtype(class_name, assoc.forward.class_name):
                return assoc, "forward"
            if assoc.opposite.role == role and self.is_subtype(class_name, assoc.opposite.class_name):
                return assoc, "opposite"
        return None

    def role_names(self) -> set:
        names = set()
        for assoc in self.associations:
            names.add(assoc.forward.role)
            names.add(assoc.opposite.role)
        return names


# -- occurrence analysis ------------------------------------------------------


def _add(a, b):
    return min(_CAP, a[0] + b[0]), min(_CAP, a[1] + b[1])


def occurrence_bounds(node) -> dict:
    """Member name -> (min, max) occurrences over every derivation of ``node``."""
    if isinstance(node, (NonterminalRef, IdentRef, Constant)):
        return {member_name(node): (1, 1)}
    if isinstance(node, Literal):
        return {}
    if isinstance(node, Sequence):
        total = {}
        for child in node.children:
            for name, bounds in occurrence_bounds(child).items():
                total[name] = _add(total.get(name, (0, 0)), bounds)
        return total
    if isinstance(node, Alternative):
        per_branch = [occurrence_bounds(b) for b in node.branches]
        names = [n for b in per_branch for n in b]
        merged = {}
        for name in dict.fromkeys(names):
            values = [b.get(name, (0, 0)) for b in per_branch]
            merged[name] = (min(v[0] for v in values), max(v[1] for v in values))
        return merged
    if isinstance(node, Repetition):
        inner = occurrence_bounds(node.child)
        if node.kind == STAR:
            return {n: (0, _CAP if hi > 0 else 0) for n, (lo, hi) in inner.items()}
        if node.kind == PLUS:
            return {n: (lo, _CAP if hi > 0 else 0) for n, (lo, hi) in inner.items()}
        if node.kind == OPTIONAL:
            return {n: (0, hi) for n, (lo, hi) in inner.items()}
    return {}


def cardinality_of(bounds) -> str:
    lo, hi = bounds
    if hi >= _CAP:
        return LIST
    if lo == 0:
        return OPTIONAL_CARD
    return ONE


# -- members ------------------------------------------------------------------


def constants_to_members(c: Constant, owner: str):
    """Map a constant to its attribute, plus the enum it needs when it has several literals."""
    if len(c.literals) == 1:
        return AttributeDef(c.attr_name, "boolean", ONE, pos=c.pos), None
    enum = EnumDef(f"{owner}_{c.attr_name}", tuple(c.literals))
    return AttributeDef(c.attr_name, "enum", ONE, enum=enum.name, pos=c.pos), enum


def _signature(node, grammar) -> tuple:
    if isinstance(node, NonterminalRef):
        return ("composition", node.target)
    if isinstance(node, IdentRef):
        ident = grammar.ident(node.ident)
        return ("attribute", value_type(ident) if ident is not None else "string")
    if len(node.literals) == 1:
        return ("attribute", "boolean")
    return ("attribute", "enum", tuple(node.literals))


def _describe(signature) -> str:
    if signature[0] == "composition":
        return signature[1]
    if signature[1] == "enum":
        return "[" + "|".join(signature[2]) + "]"
    return signature[1]


def infer_members(p, grammar, diagnostics: Optional[list] = None) -> Members:
    """Members a production's right-hand side binds, in order of first occurrence."""
    bounds = occurrence_bounds(p.rhs)
    first = {}
    for node in walk_rhs(p.rhs):
        name = member_name(node)
        if name is None:
            continue
        signature = _signature(node, grammar)
        if name not in first:
            first[name] = (signature, node)
        elif first[name][0] != signature and diagnostics is not None:
            diagnostics.append(
                Diagnostic.error(
                    f"member {name} of {p.name} is bound to conflicting types "
                    f"{_describe(first[name][0])} and {_describe(signature)}",
                    node.pos,
                )
            )

    attributes, compositions, enums = [], [], []
    for name, (signature, node) in first.items():
        cardinality = cardinality_of(bounds[name])
        if isinstance(node, NonterminalRef):
            compositions.append(CompositionDef(name, node.target, cardinality, pos=node.pos))
        elif isinstance(node, IdentRef):
            attributes.append(AttributeDef(name, signature[1], cardinality, pos=node.pos))
        else:
            attr, enum = constants_to_members(node, p.name)
            if enum is not None:
                attr = replace(attr, cardinality=cardinality)
                enums.append(enum)
            attributes.append(attr)
    return Members(tuple(attributes), tuple(compositions), tuple(enums))


def _ast_member(attr, grammar):
    ident = grammar.ident(attr.type_name)
    if ident is not None:
        return AttributeDef(attr.name, value_type(ident), attr.cardinality, origin=AST, pos=attr.pos)
    return CompositionDef(attr.name, attr.type_name, attr.cardinality, origin=AST, pos=attr.pos)


def _same_type(a, b) -> bool:
    return type(a) is type(b) and a.type_name == b.type_name


def derive_schema(g) -> Schema:
    """Derive the abstract syntax of a validated grammar."""
    diagnostics = []
    enums = []
    own = {}
    for p in g.productions:
        members = infer_members(p, g, diagnostics)
        own[p.name] = members
        enums.extend(members.enums)

    ast_members = {}
    ast_methods = {}
    for block in g.ast_blocks:
        ast_members.setdefault(block.target, []).extend(_ast_member(a, g) for a in block.attributes)
        ast_methods.setdefault(block.target, []).extend(MethodDef(m.signature, m.body) for m in block.methods)

    classes = {}

    def inherited(name, seen=()):
        p = g.production(name)
        if p is None or p.super_rule is None or p.super_rule in seen:
            return {}
        parent = build(p.super_rule, seen + (name,))
        if parent is None:
            return {}
        result = dict(inherited(p.super_rule, seen + (name,)))
        for m in parent.attributes + parent.compositions:
            result.setdefault(m.name, m)
        return result

    def build(name, seen=()):
        if name in classes:
            return classes[name]
        p = g.production(name)
        if p is None:
            return None
        above = inherited(name, seen)
        attributes, compositions, bound = [], [], []
        for m in own[name].attributes + own[name].compositions:
            bound.append((m.name, m.cardinality))
            parent_member = above.get(m.name)
            if parent_member is None:
                (attributes if isinstance(m, AttributeDef) else compositions).append(m)
            elif not _same_type(parent_member, m):
                diagnostics.append(
                    Diagnostic.error(
                        f"{name} redeclares inherited member {m.name} with type {m.type_name} "
                        f"instead of {parent_member.type_name}",
                        m.pos,
                    )
                )
            elif (parent_member.cardinality == LIST) != (m.cardinality == LIST):
                diagnostics.append(
                    Diagnostic.error(
                        f"{name} redeclares inherited member {m.name} as {m.cardinality} "
                        f"instead of {parent_member.cardinality}",
                        m.pos,
                    )
                )
        taken = {m.name: m for m in attributes + compositions}
        taken.update(above)
        for m in ast_members.get(name, ()):
            existing = taken.get(m.name)
            if existing is None:
                (attributes if isinstance(m, AttributeDef) else compositions).append(m)
                taken[m.name] = m
            elif not _same_type(existing, m):
                diagnostics.append(
                    Diagnostic.error(f"ast attribute {m.name} conflicts with member of {name}", m.pos)
                )
        cls = ClassDef(
            name=name,
            super_class=p.super_rule,
            interfaces=tuple(p.interfaces),
            attributes=tuple(attributes),
            compositions=tuple(compositions),
            methods=tuple(ast_methods.get(name, ())),
            bound=tuple(bound),
            pos=p.pos,
        )
        classes[name] = cls
        return cls

    for p in g.productions:
        build(p.name)

    interfaces = []
    for decl in g.interfaces:
        members = ast_members.get(decl.name, [])
        interfaces.append(
            InterfaceDef(
                name=decl.name,
                attributes=tuple(m for m in members if isinstance(m, AttributeDef)),
                compositions=tuple(m for m in members if isinstance(m, CompositionDef)),
                methods=tuple(ast_methods.get(decl.name, ())),
                pos=decl.pos,
            )
        )

    associations = tuple(
        AssociationDef(
            AssociationEnd(a.source_class, a.source_role, a.target_mult),
            AssociationEnd(a.target_class, a.opposite_role, a.opposite_mult),
            a.pos,
        )
        for a in g.associations
    )

    schema = Schema(
        grammar_name=g.name,
        package=g.package,
        start=g.productions[0].name if g.productions else None,
        classes=tuple(classes[p.name] for p in g.productions),
        interfaces=tuple(interfaces),
        enums=tuple(enums),
        associations=associations,
        ref_specs=tuple(g.concepts),
    )

    for assoc in associations:
        for end in (assoc.forward, assoc.opposite):
            if end.role in schema.members(end.class_name):
                diagnostics.append(
                    Diagnostic.error(
                        f"association role {end.role} collides with a member of {end.class_name}", assoc.pos
                    )
                )
    return replace(schema, diagnostics=tuple(diagnostics))
