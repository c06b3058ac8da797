from __future__ import annotations

import json

from .diagnostics import WorkbenchError
from .model import ModelNode, ModelTree, visit


def export_model(tree: ModelTree, links=None, diagnostics=(), grammar: str = "") -> dict:
    """Model graph document: nodes in pre-order plus the forward links between them."""
    nodes = visit(tree, "pre")
    ids = {node: index for index, node in enumerate(nodes)}
    document_nodes = [
        {
            "class": node.class_name,
            "id": ids[node],
            "attributes": {k: list(v) if isinstance(v, list) else v for k, v in node.attributes.items()},
            "children": {role: [ids[c] for c in kids] for role, kids in node.children.items()},
        }
        for node in nodes
    ]
    document_links = []
    if links is not None:
        for name, entry in links.entries.items():
            role = entry.association.forward.role
            for source, targets in entry.forward.items():
                for target in targets:
                    document_links.append(
                        {"association": name, "role": role, "sourceId": ids[source], "targetId": ids[target]}
                    )
    document_links.sort(key=lambda link: (link["association"], link["sourceId"], link["targetId"]))
    return {
        "source": tree.source,
        "grammar": grammar,
        "nodes": document_nodes,
        "links": document_links,
        "diagnostics": [d.as_dict() for d in diagnostics],
    }


def dumps_model(document, indent: int = 2) -> str:
    return json.dumps(document, indent=indent, ensure_ascii=False) + "\n"


def read_model(document: dict):
    """Rebuild the tree of an exported document; returns ``(tree, links)``."""
    entries = document.get("nodes") or []
    if not entries:
        raise WorkbenchError("model document has no nodes")
    nodes = {}
    for entry in entries:
        nodes[entry["id"]] = ModelNode(
            entry["id"],
            entry["class"],
            {k: list(v) if isinstance(v, list) else v for k, v in entry["attributes"].items()},
        )
    for entry in entries:
        node = nodes[entry["id"]]
        try:
            node.children = {role: [nodes[i] for i in ids] for role, ids in entry["children"].items()}
        except KeyError as e:
            raise WorkbenchError(f"node {entry['id']} refers to missing child {e.args[0]}") from None
    links = [(l["association"], l["role"], l["sourceId"], l["targetId"]) for l in document.get("links", [])]
    for _, _, source, target in links:
        if source not in nodes or target not in nodes:
            raise WorkbenchError(f"link {source} -> {target} refers to a missing node")
    return ModelTree(nodes[entries[0]["id"]], document.get("source", "")), links
