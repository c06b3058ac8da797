"""Parse tree of a grammar file.

Every node keeps the ``Position`` it was read from so that later stages
can point diagnostics back into the grammar text.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .diagnostics import NOWHERE, Position

STAR = "star"
PLUS = "plus"
OPTIONAL = "optional"

@dataclass(frozen=True)
class Sequence:
    children: tuple
    pos: Position = NOWHERE


@dataclass(frozen=True)
class Alternative:
    branches: tuple
    pos: Position = NOWHERE


@dataclass(frozen=True)
class Repetition:
    child: "RhsNode"
    kind: str
    pos: Position = NOWHERE


@dataclass(frozen=True)
class NonterminalRef:
    attr_name: Optional[str]
    target: str
    pos: Position = NOWHERE


@dataclass(frozen=True)
class IdentRef:
    attr_name: Optional[str]
    ident: str
    pos: Position = NOWHERE


@dataclass(frozen=True)
class Literal:
    text: str
    # written with the "!" prefix
    marked: bool = False
    pos: Position = NOWHERE


@dataclass(frozen=True)
class Constant:
    attr_name: str
    literals: tuple
    pos: Position = NOWHERE


RhsNode = Union[Sequence, Alternative, Repetition, NonterminalRef, IdentRef, Literal, Constant]


@dataclass(frozen=True)
class IdentDef:
    name: str
    pattern: str
    regex: str
    transform: str = "string"
    body: Optional[str] = None
    result_type: Optional[str] = None
    matches_nonempty: bool = True
    pos: Position = NOWHERE

    @property
    def is_opaque(self) -> bool:
        return self.body is not None


@dataclass(frozen=True)
class Production:
    name: str
    rhs: RhsNode
    super_rule: Optional[str] = None
    interfaces: tuple = ()
    pos: Position = NOWHERE


@dataclass(frozen=True)
class InterfaceDecl:
    name: str
    pos: Position = NOWHERE


@dataclass(frozen=True)
class AstAttribute:
    name: str
    type_name: str
    cardinality: str = "one"
    pos: Position = NOWHERE


@dataclass(frozen=True)
class AstMethod:
    signature: str
    body: str
    pos: Position = NOWHERE


@dataclass(frozen=True)
class AstBlock:
    target: str
    attributes: tuple = ()
    methods: tuple = ()
    pos: Position = NOWHERE


@dataclass(frozen=True)
class Multiplicity:
    lo: int
    hi: Optional[int]

    def __post_init__(self):
        if self.lo < 0 or (self.hi is not None and self.hi < self.lo):
            raise ValueError(f"invalid multiplicity {self.lo}..{self.hi}")

    def admits(self, count: int) -> bool:
        return count >= self.lo and (self.hi is None or count <= self.hi)

    def __str__(self) -> str:
        if self.hi is None:
            return "*" if self.lo == 0 else f"{self.lo}..*"
        if self.lo == self.hi:
            return str(self.lo)
        return f"{self.lo}..{self.hi}"


ONE = Multiplicity(1, 1)
MANY = Multiplicity(0, None)


@dataclass(frozen=True)
class AssociationDecl:
    source_class: str
    source_role: str
    source_mult: Multiplicity
    target_class: str
    target_mult: Multiplicity
    target_role: Optional[str] = None
    trailing_mult: Optional[Multiplicity] = None
    pos: Position = NOWHERE

    @property
    def opposite_role(self) -> str:
        return self.target_role or self.source_class

    @property
    def opposite_mult(self) -> Multiplicity:
        return self.trailing_mult or self.source_mult


@dataclass(frozen=True)
class ReferenceSpec:
    role: str
    source_class: str
    source_attr: str
    target_class: str
    target_attr: str
    concept: str = "simplereference"
    pos: Position = NOWHERE


@dataclass(frozen=True)
class GrammarAst:
    name: str
    package: Optional[str] = None
    idents: tuple = ()
    productions: tuple = ()
    interfaces: tuple = ()
    ast_blocks: tuple = ()
    associations: tuple = ()
    concepts: tuple = ()
    pos: Position = NOWHERE

    def production(self, name: str) -> Optional[Production]:
        for p in self.productions:
            if p.name == name:
                return p
        return None

    def ident(self, name: str) -> Optional[IdentDef]:
        for i in self.all_idents():
            if i.name == name:
                return i
        return None

    def all_idents(self) -> tuple:
        """User idents in declaration order, then the predefined ones they do not override."""
        declared = {i.name for i in self.idents}
        return tuple(self.idents) + tuple(i for i in PREDEFINED_IDENTS if i.name not in declared)

    @property
    def interface_names(self) -> list:
        return [i.name for i in self.interfaces]


PREDEFINED_IDENTS = (
    IdentDef(
        name="IDENT",
        pattern="('a'..'z'|'A'..'Z'|'_') ('a'..'z'|'A'..'Z'|'_'|'0'..'9')*",
        regex=r"[A-Za-z_][A-Za-z0-9_]*",
    ),
    IdentDef(
        name="STRING",
        pattern="'\"' (~'\"')* '\"'",
        regex=r'"(?:[^"\\\n]|\\.)*"',
        transform="quoted",
    ),
)


def walk_rhs(node):
    """Yield every node of a right-hand side, parents before children."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        if isinstance(current, Sequence):
            stack.extend(reversed(current.children))
        elif isinstance(current, Alternative):
            stack.extend(reversed(current.branches))
        elif isinstance(current, Repetition):
            stack.append(current.child)


def default_member_name(target: str) -> str:
    if target.isupper():
        return target.lower()
    return target[:1].lower() + target[1:]


def member_name(node) -> Optional[str]:
    if isinstance(node, (NonterminalRef, IdentRef)):
        target = node.target if isinstance(node, NonterminalRef) else node.ident
        return node.attr_name or default_member_name(target)
    if isinstance(node, Constant):
        return node.attr_name
    return None

