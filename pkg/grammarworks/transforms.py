"""Builtin ident transforms.

Opaque transform bodies from a grammar are never executed; the transform
applied to a token is always one of the builtins registered here.
"""
from __future__ import annotations

import math

from .diagnostics import NOWHERE, Position, TransformError

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "'": "'", "\\": "\\"}


def _to_string(lexeme: str):
    return lexeme


def _to_int(lexeme: str):
    value = int(lexeme, 10)
    if not INT_MIN <= value <= INT_MAX:
        raise OverflowError(f"{lexeme} does not fit in 64 bits")
    return value


def _to_float(lexeme: str):
    value = float(lexeme)
    if math.isinf(value) and "inf" not in lexeme.lower():
        raise OverflowError(f"{lexeme} overflows a float")
    return value


def _to_cardinality(lexeme: str):
    if lexeme == "*":
        return -1
    return _to_int(lexeme)


def unescape(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append(_ESCAPES.get(nxt, nxt))
            i += 2
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def _to_quoted(lexeme: str):
    return unescape(lexeme[1:-1])


TRANSFORMS = {
    "string": (_to_string, "string"),
    "int": (_to_int, "int"),
    "float": (_to_float, "float"),
    "cardinality": (_to_cardinality, "int"),
    # predefined STRING token only
    "quoted": (_to_quoted, "string"),
}

USER_TRANSFORMS = ("string", "int", "float", "cardinality")

_RESULT_TYPES = {
    "int": "int",
    "integer": "int",
    "long": "int",
    "float": "float",
    "double": "float",
    "string": "string",
}


def effective_transform(ident) -> str:
    """Name of the builtin that is applied to tokens of ``ident``.

    Returns None for an opaque body that maps to no builtin.
    """
    if not ident.is_opaque:
        return ident.transform
    by_name = ident.name.lower()
    if by_name in USER_TRANSFORMS:
        return by_name
    return _RESULT_TYPES.get((ident.result_type or "").lower())


def value_type(ident) -> str:
    name = effective_transform(ident) or "string"
    return TRANSFORMS.get(name, TRANSFORMS["string"])[1]


def transform_ident(transform_name: str, lexeme: str, position: Position = NOWHERE):
    try:
        fn, _ = TRANSFORMS[transform_name]
    except KeyError:
        raise TransformError(f"unknown transform '{transform_name}'", position) from None
    try:
        return fn(lexeme)
    except (ValueError, OverflowError) as e:
        raise TransformError(f"cannot convert '{lexeme}' with transform '{transform_name}': {e}", position) from e
