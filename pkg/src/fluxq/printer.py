"""Concrete-syntax rendering of types and values.

Output round-trips through the parser: postfix quantifiers bind tightest,
then ``,``, then ``|``; ``t | ()`` prints as ``t?``.
"""

from __future__ import annotations

from .types import (
    BoolAtom, Element, Empty, Or, Seq, Star, StringAtom, Type, Var,
)
from .values import BoolVal, Forest, Node, StrVal, Tree

_OR, _SEQ, _POSTFIX, _PRIMARY = range(4)


def type_str(t: Type) -> str:
    return _render(t, _OR)


def _render(t: Type, level: int) -> str:
    if isinstance(t, Empty):
        return "()"
    if isinstance(t, BoolAtom):
        return "bool"
    if isinstance(t, StringAtom):
        return "string"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Element):
        if isinstance(t.content, Empty):
            return f"{t.label}[]"
        return f"{t.label}[{_render(t.content, _OR)}]"
    if isinstance(t, Star):
        return f"{_render(t.inner, _PRIMARY)}*"
    if isinstance(t, Or):
        if isinstance(t.right, Empty):
            return f"{_render(t.left, _PRIMARY)}?"
        text = f"{_render(t.left, _SEQ)}|{_render(t.right, _OR)}"
        return text if level <= _OR else f"({text})"
    assert isinstance(t, Seq)
    text = f"{_render(t.left, _POSTFIX)},{_render(t.right, _SEQ)}"
    return text if level <= _SEQ else f"({text})"


def escape_string(s: str) -> str:
    return (s.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\t", "\\t"))


def tree_str(t: Tree) -> str:
    if isinstance(t, BoolVal):
        return "true" if t.value else "false"
    if isinstance(t, StrVal):
        return f'"{escape_string(t.value)}"'
    assert isinstance(t, Node)
    if not t.children:
        return f"{t.label}[]"
    return f"{t.label}[{value_str(t.children)}]"


def value_str(v: Forest) -> str:
    if not v:
        return "()"
    return ",".join(tree_str(t) for t in v)
