"""XML forest values and semantic membership ``v : t``.

A forest is a tuple of trees; a tree is a boolean, a string, or a labeled
node with a child forest.  Membership matches a forest against a type viewed
as a regular expression over tree matchers, recursing into element content.
Star iterations consume nonempty prefixes only, so matching terminates even
when the star body is nullable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .types import (
    Atom, BoolAtom, Element, Empty, Or, Seq, Signature, Star, StringAtom,
    Type, Var,
)


@dataclass(frozen=True)
class BoolVal:
    value: bool


@dataclass(frozen=True)
class StrVal:
    value: str


@dataclass(frozen=True)
class Node:
    label: str
    children: "Forest"


Tree = Union[BoolVal, StrVal, Node]
Forest = tuple[Tree, ...]

EMPTY_FOREST: Forest = ()

TRUE = BoolVal(True)
FALSE = BoolVal(False)


def forest(*trees: Tree) -> Forest:
    return tuple(trees)


def tree_depth(t: Tree) -> int:
    if isinstance(t, Node):
        return 1 + forest_depth(t.children)
    return 1


def forest_depth(v: Forest) -> int:
    return max((tree_depth(t) for t in v), default=0)


def max_width(v: Forest) -> int:
    """Largest forest length anywhere in ``v``, including nested child lists."""
    w = len(v)
    for t in v:
        if isinstance(t, Node):
            w = max(w, max_width(t.children))
    return w


def member(sig: Signature, v: Forest, t: Type) -> bool:
    """Decide ``v`` ∈ the set of values denoted by ``t`` under ``sig``."""
    memo: dict[tuple[int, Type], frozenset[int]] = {}

    def tree_matches(tree: Tree, atom: Atom) -> bool:
        if isinstance(atom, BoolAtom):
            return isinstance(tree, BoolVal)
        if isinstance(atom, StringAtom):
            return isinstance(tree, StrVal)
        assert isinstance(atom, Element)
        return (isinstance(tree, Node) and tree.label == atom.label
                and member(sig, tree.children, atom.content))

    def ends(i: int, node: Type) -> frozenset[int]:
        """End positions j such that v[i:j] matches ``node``."""
        key = (i, node)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Empty):
            out = frozenset((i,))
        elif isinstance(node, Atom):
            out = frozenset((i + 1,)) if i < len(v) and tree_matches(v[i], node) else frozenset()
        elif isinstance(node, Or):
            out = ends(i, node.left) | ends(i, node.right)
        elif isinstance(node, Seq):
            out = frozenset(k for j in ends(i, node.left) for k in ends(j, node.right))
        elif isinstance(node, Star):
            reached = {i}
            frontier = [i]
            while frontier:
                j = frontier.pop()
                for k in ends(j, node.inner):
                    if k > j and k not in reached:  # nonempty prefixes only
                        reached.add(k)
                        frontier.append(k)
            out = frozenset(reached)
        else:
            assert isinstance(node, Var)
            out = ends(i, sig.definition(node.name))
        memo[key] = out
        return out

    return len(v) in ends(0, t)
