from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Position


@dataclass(eq=False)
class ModelNode:
    """One parsed object. Identity is the node itself; ``node_id`` is its pre-order index."""

    node_id: int
    class_name: str
    attributes: dict = field(default_factory=dict)
    # role -> children in textual order
    children: dict = field(default_factory=dict)
    line: int = 0
    column: int = 0
    # attribute -> position of the token that first set it
    attribute_positions: dict = field(default_factory=dict)

    @property
    def position(self) -> Position:
        return Position(self.line, self.column)

    def child_nodes(self) -> list:
        """All children across roles, in textual order."""
        return sorted((c for kids in self.children.values() for c in kids), key=lambda c: c.node_id)

    def label(self) -> str:
        for value in self.attributes.values():
            if isinstance(value, str) and value:
                return f"{self.class_name} {value}"
        return self.class_name

    def snapshot(self) -> tuple:
        """Structural value of the subtree, for equality checks."""
        return (
            self.class_name,
            self.line,
            self.column,
            tuple((k, _freeze(v)) for k, v in self.attributes.items()),
            tuple((role, tuple(c.snapshot() for c in kids)) for role, kids in self.children.items()),
        )

    def __repr__(self) -> str:
        return f"<{self.class_name}#{self.node_id}>"


def _freeze(value):
    return tuple(value) if isinstance(value, list) else value


@dataclass(eq=False)
class ModelTree:
    root: ModelNode
    source: str = ""

    def nodes(self) -> list:
        return visit(self, "pre")

    def __len__(self) -> int:
        return len(self.nodes())


def visit(tree, order: str = "pre") -> list:
    """Walk the composition tree; children are visited in textual order."""
    if order not in ("pre", "post"):
        raise ValueError(f"unknown traversal order '{order}'")
    root = tree.root if isinstance(tree, ModelTree) else tree
    result = []
    if order == "pre":
        stack = [root]
        while stack:
            node = stack.pop()
            result.append(node)
            stack.extend(reversed(node.child_nodes()))
        return result
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            result.append(node)
            continue
        stack.append((node, True))
        stack.extend((c, False) for c in reversed(node.child_nodes()))
    return result
