from __future__ import annotations

import json

from .metamodel import LIST, OPTIONAL_CARD, AttributeDef, Schema

FORMATS = ("json", "plantuml")

_UML_CARDINALITY = {"one": "1", OPTIONAL_CARD: "0..1", LIST: "*"}


def _member(m) -> dict:
    return {"name": m.name, "type": m.type_name, "cardinality": m.cardinality}


def _methods(methods) -> list:
    return [{"signature": m.signature, "body": m.body} for m in methods]


def _end(end) -> dict:
    return {"class": end.class_name, "role": end.role, "multiplicity": str(end.multiplicity)}


def schema_document(s: Schema) -> dict:
    return {
        "grammar": s.grammar_name,
        "package": s.package,
        "classes": [
            {
                "name": c.name,
                "superClass": c.super_class,
                "interfaces": list(c.interfaces),
                "attributes": [_member(a) for a in c.attributes],
                "compositions": [_member(m) for m in c.compositions],
                "methods": _methods(c.methods),
            }
            for c in s.classes
        ],
        "interfaces": [
            {
                "name": i.name,
                "attributes": [_member(a) for a in i.attributes],
                "compositions": [_member(m) for m in i.compositions],
                "methods": _methods(i.methods),
            }
            for i in s.interfaces
        ],
        "enums": [{"name": e.name, "literals": list(e.literals)} for e in s.enums],
        "associations": [
            {"name": a.name, "forward": _end(a.forward), "opposite": _end(a.opposite)} for a in s.associations
        ],
        "references": [
            {
                "role": r.role,
                "concept": r.concept,
                "source": f"{r.source_class}.{r.source_attr}",
                "target": f"{r.target_class}.{r.target_attr}",
            }
            for r in s.ref_specs
        ],
    }


def _uml_body(members, methods) -> list:
    lines = []
    for m in members:
        if not isinstance(m, AttributeDef):
            continue
        suffix = "" if m.cardinality == "one" else f" [{_UML_CARDINALITY[m.cardinality]}]"
        lines.append(f"  {m.name} : {m.type_name}{suffix}")
    for method in methods:
        lines.append(f"  {{method}} {' '.join(method.signature.split())}")
    return lines


def _plantuml(s: Schema) -> str:
    out = ["@startuml", f"' grammar {s.grammar_name}"]
    for c in s.classes:
        out.append(f"class {c.name} {{")
        out.extend(_uml_body(c.attributes, c.methods))
        out.append("}")
    for i in s.interfaces:
        out.append(f"interface {i.name} {{")
        out.extend(_uml_body(i.attributes, i.methods))
        out.append("}")
    for e in s.enums:
        out.append(f"enum {e.name} {{")
        out.extend(f"  {literal}" for literal in e.literals)
        out.append("}")
    for c in s.classes:
        if c.super_class:
            out.append(f"{c.name} --|> {c.super_class}")
        for iface in c.interfaces:
            out.append(f"{c.name} ..|> {iface}")
    for owner in list(s.classes) + list(s.interfaces):
        for m in owner.compositions:
            out.append(f'{owner.name} *-- "{_UML_CARDINALITY[m.cardinality]}" {m.target} : {m.name}')
    for a in s.associations:
        out.append(
            f'{a.forward.class_name} "{a.opposite.multiplicity}" -- "{a.forward.multiplicity}" '
            f"{a.opposite.class_name} : {a.forward.role} / {a.opposite.role}"
        )
    out.append("@enduml")
    return "\n".join(out) + "\n"


def export_schema(s: Schema, format: str = "json", indent: int = 2) -> str:
    if format == "json":
        return json.dumps(schema_document(s), indent=indent, ensure_ascii=False) + "\n"
    if format == "plantuml":
        return _plantuml(s)
    raise ValueError(f"unknown schema format '{format}', expected one of {', '.join(FORMATS)}")
