"""Name-based association links over a parsed model."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .diagnostics import Diagnostic, Position, UnknownRoleError
from .model import ModelNode, ModelTree, visit

FORWARD = "forward"
OPPOSITE = "opposite"


class ReferenceResolver:
    """Strategy that maps names to the nodes defining them."""

    def __init__(self, spec):
        self.spec = spec

    def define(self, name: str, node: ModelNode, position: Position):
        """Record a definition; returns a Diagnostic when it is rejected."""
        raise NotImplementedError("Subclasses should implement this!")

    def lookup(self, name: str):
        raise NotImplementedError("Subclasses should implement this!")

    def is_ambiguous(self, name: str) -> bool:
        return False

    def entries(self) -> dict:
        raise NotImplementedError("Subclasses should implement this!")


class SimpleReferenceResolver(ReferenceResolver):
    """One flat namespace per file; a name defined twice resolves to nothing."""

    def __init__(self, spec):
        super().__init__(spec)
        self._nodes = {}
        self._positions = {}
        self._ambiguous = set()

    def define(self, name, node, position):
        if name in self._nodes:
            self._ambiguous.add(name)
            return Diagnostic.error(
                f"duplicate definition {name} (first defined at {self._positions[name]})", position
            )
        self._nodes[name] = node
        self._positions[name] = position
        return None

    def lookup(self, name):
        if name in self._ambiguous:
            return None
        return self._nodes.get(name)

    def is_ambiguous(self, name):
        return name in self._ambiguous

    def entries(self):
        return {name: node for name, node in self._nodes.items() if name not in self._ambiguous}


RESOLVERS = {
    "simplereference": SimpleReferenceResolver,
}


@dataclass(frozen=True)
class SymbolTable:
    # association role -> resolver holding its definitions
    resolvers: Mapping
    specs: tuple = ()

    def table(self, role: str) -> dict:
        resolver = self.resolvers.get(role)
        return resolver.entries() if resolver is not None else {}

    def lookup(self, role: str, name: str):
        resolver = self.resolvers.get(role)
        return resolver.lookup(name) if resolver is not None else None


def _names(value) -> list:
    if isinstance(value, list):
        return [v for v in value if isinstance(v, str)]
    return [value] if isinstance(value, str) else []


def build_symbol_table(tree: ModelTree, specs, schema):
    """Collect the definitions every reference concept resolves against.

    Specs sharing a target path share one resolver, so a duplicate name is
    reported once.
    """
    diagnostics = []
    by_path = {}
    resolvers = {}
    nodes = visit(tree, "pre")
    for spec in specs:
        key = (spec.concept, spec.target_class, spec.target_attr)
        if key not in by_path:
            resolver_cls = RESOLVERS.get(spec.concept)
            if resolver_cls is None:
                diagnostics.append(Diagnostic.error(f"unsupported concept '{spec.concept}'", spec.pos))
                continue
            resolver = resolver_cls(spec)
            for node in nodes:
                if not schema.is_subtype(node.class_name, spec.target_class):
                    continue
                where = node.attribute_positions.get(spec.target_attr, node.position)
                for name in _names(node.attributes.get(spec.target_attr)):
                    found = resolver.define(name, node, where)
                    if found is not None:
                        diagnostics.append(found)
            by_path[key] = resolver
        resolvers[spec.role] = by_path[key]
    return SymbolTable(MappingProxyType(resolvers), tuple(specs)), diagnostics


def _order(node: ModelNode):
    return node.line, node.column, node.node_id


@dataclass(frozen=True)
class AssociationLinks:
    association: object
    forward: Mapping = field(default_factory=dict)
    opposite: Mapping = field(default_factory=dict)


class LinkTable:
    """Resolved links per association, navigable from either end."""

    def __init__(self, tree: ModelTree, schema, entries: dict, unresolved=frozenset()):
        self.tree = tree
        self.schema = schema
        self.entries = entries
        # (node, role) pairs whose reference failed and was already reported
        self.unresolved = unresolved

    def links(self, node: ModelNode, role: str) -> tuple:
        found = self.schema.association_for_role(node.class_name, role)
        if found is None:
            raise UnknownRoleError(f"{node.class_name} has no role {role}", node.position)
        assoc, direction = found
        entry = self.entries.get(assoc.name)
        if entry is None:
            return ()
        side = entry.forward if direction == FORWARD else entry.opposite
        return side.get(node, ())

    def require_role(self, role: str) -> None:
        if role not in self.schema.role_names():
            raise UnknownRoleError(f"unknown role {role}")

    def pairs(self) -> list:
        result = []
        for name, entry in self.entries.items():
            for source, targets in entry.forward.items():
                result.extend((name, source.node_id, target.node_id) for target in targets)
        return sorted(result)

    def __len__(self) -> int:
        return len(self.pairs())

    def __eq__(self, other) -> bool:
        return isinstance(other, LinkTable) and self.pairs() == other.pairs()

    __hash__ = None


def resolve_links(tree: ModelTree, schema, table: SymbolTable):
    diagnostics = []
    forward = {a.name: {} for a in schema.associations}
    opposite = {a.name: {} for a in schema.associations}
    unresolved = set()
    nodes = visit(tree, "pre")
    for spec in table.specs:
        resolver = table.resolvers.get(spec.role)
        if resolver is None:
            continue
        found = schema.association_for_role(spec.source_class, spec.role)
        if found is None:
            diagnostics.append(Diagnostic.error(f"{spec.source_class} has no role {spec.role}", spec.pos))
            continue
        assoc, direction = found
        for node in nodes:
            if not schema.is_subtype(node.class_name, spec.source_class):
                continue
            where = node.attribute_positions.get(spec.source_attr, node.position)
            for name in _names(node.attributes.get(spec.source_attr)):
                target = resolver.lookup(name)
                if target is None:
                    unresolved.add((node, spec.role))
                    if not resolver.is_ambiguous(name):
                        diagnostics.append(Diagnostic.error(f"unresolved reference {name}", where))
                    continue
                source, sink = (node, target) if direction == FORWARD else (target, node)
                forward[assoc.name].setdefault(source, []).append(sink)
                opposite[assoc.name].setdefault(sink, []).append(source)

    entries = {}
    for assoc in schema.associations:
        entries[assoc.name] = AssociationLinks(
            assoc,
            MappingProxyType({k: tuple(sorted(v, key=_order)) for k, v in forward[assoc.name].items()}),
            MappingProxyType({k: tuple(sorted(v, key=_order)) for k, v in opposite[assoc.name].items()}),
        )
    return LinkTable(tree, schema, entries, frozenset(unresolved)), diagnostics


def check_multiplicities(links: LinkTable, schema) -> list:
    diagnostics = []
    nodes = visit(links.tree, "pre")
    for assoc in schema.associations:
        entry = links.entries.get(assoc.name)
        for end, side in ((assoc.forward, FORWARD), (assoc.opposite, OPPOSITE)):
            held = {} if entry is None else (entry.forward if side == FORWARD else entry.opposite)
            for node in nodes:
                if not schema.is_subtype(node.class_name, end.class_name):
                    continue
                if (node, end.role) in links.unresolved:
                    continue
                count = len(held.get(node, ()))
                if not end.multiplicity.admits(count):
                    diagnostics.append(
                        Diagnostic.error(
                            f"{node.label()} has {count} {end.role} link(s), expected {end.multiplicity}",
                            node.position,
                        )
                    )
    return diagnostics


def direct_successors(node: ModelNode, out_role: str, through_role: str, links: LinkTable) -> set:
    """Nodes reached from ``node`` by one ``out_role`` link followed by one ``through_role`` link."""
    links.require_role(out_role)
    links.require_role(through_role)
    result = set()
    for step in links.links(node, out_role):
        result.update(links.links(step, through_role))
    return result
