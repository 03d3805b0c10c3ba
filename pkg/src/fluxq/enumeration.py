"""Bounded enumeration: values of a type, words of atoms, and the
brute-force subtyping oracle built from them.

The semantic language and atom set of a type are infinite (they are closed
under subtyping), so every function here is parameterized by explicit finite
bounds and universes and computes the corresponding finite restriction,
exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .subtyping import atom_subtype
from .types import (
    Atom, BoolAtom, Element, Empty, EMPTY, Or, Seq, Signature, Star,
    StringAtom, Type, Var,
)
from .values import FALSE, Forest, Node, StrVal, TRUE, member

DEFAULT_STRINGS: tuple[str, ...] = ("", "a")

Word = tuple[Atom, ...]


def word_to_type(word: Word) -> Type:
    """A word of atoms viewed as a type: their concatenation."""
    t: Type = EMPTY
    for atom in reversed(word):
        t = atom if isinstance(t, Empty) else Seq(atom, t)
    return t


def values_upto(sig: Signature, t: Type, depth: int, width: int,
                strings: tuple[str, ...] = DEFAULT_STRINGS) -> frozenset[Forest]:
    """All values of ``t`` with nesting depth ≤ depth and every forest length
    ≤ width, strings drawn from ``strings``.

    Exhaustive within the bounds: a forest is produced iff it conforms to
    ``t`` and respects them.
    """

    def gen(node: Type, d: int) -> frozenset[Forest]:
        if isinstance(node, Empty):
            return frozenset(((),))
        if isinstance(node, BoolAtom):
            return frozenset(((TRUE,), (FALSE,))) if d >= 1 else frozenset()
        if isinstance(node, StringAtom):
            if d < 1:
                return frozenset()
            return frozenset(((StrVal(s),) for s in strings))
        if isinstance(node, Element):
            if d < 1:
                return frozenset()
            return frozenset(((Node(node.label, v),)
                              for v in gen(node.content, d - 1)))
        if isinstance(node, Or):
            return gen(node.left, d) | gen(node.right, d)
        if isinstance(node, Seq):
            lefts = gen(node.left, d)
            rights = gen(node.right, d)
            return frozenset(a + b for a in lefts for b in rights
                             if len(a) + len(b) <= width)
        if isinstance(node, Star):
            parts = [v for v in gen(node.inner, d) if v]
            closure = {(): None}
            frontier = [()]
            while frontier:
                base = frontier.pop()
                for part in parts:
                    ext = base + part
                    if len(ext) <= width and ext not in closure:
                        closure[ext] = None
                        frontier.append(ext)
            return frozenset(closure)
        assert isinstance(node, Var)
        return gen(sig.definition(node.name), d)

    return frozenset(v for v in gen(t, depth) if len(v) <= width)


def words_upto(sig: Signature, t: Type, k: int,
               universe: frozenset[Atom]) -> frozenset[Word]:
    """Words over ``universe`` of length ≤ k that are subtypes of ``t``.

    This is the bounded, universe-restricted language of ``t``: the letters
    of a word may be any universe atoms below the syntactic atoms of ``t``.
    """

    @lru_cache(maxsize=None)
    def below(atom: Atom) -> tuple[Atom, ...]:
        return tuple(u for u in universe if atom_subtype(sig, u, atom))

    def gen(node: Type) -> frozenset[Word]:
        if isinstance(node, Empty):
            return frozenset(((),))
        if isinstance(node, Atom):
            return frozenset((u,) for u in below(node))
        if isinstance(node, Or):
            return gen(node.left) | gen(node.right)
        if isinstance(node, Seq):
            lefts = gen(node.left)
            rights = gen(node.right)
            return frozenset(a + b for a in lefts for b in rights
                             if len(a) + len(b) <= k)
        if isinstance(node, Star):
            parts = [w for w in gen(node.inner) if w]
            closure = {(): None}
            frontier = [()]
            while frontier:
                base = frontier.pop()
                for part in parts:
                    ext = base + part
                    if len(ext) <= k and ext not in closure:
                        closure[ext] = None
                        frontier.append(ext)
            return frozenset(closure)
        assert isinstance(node, Var)
        return gen(sig.definition(node.name))

    return frozenset(w for w in gen(t) if len(w) <= k)


def sample_value(sig: Signature, t: Type, depth: int, width: int,
                 strings: tuple[str, ...] = DEFAULT_STRINGS) -> Forest | None:
    """One value of ``t`` within the bounds, or None if none exists there.

    Linear in the type size: picks the first viable alternative instead of
    enumerating."""
    if isinstance(t, Empty):
        return ()
    if isinstance(t, BoolAtom):
        return (TRUE,) if depth >= 1 and width >= 1 else None
    if isinstance(t, StringAtom):
        if depth < 1 or width < 1 or not strings:
            return None
        return (StrVal(strings[0]),)
    if isinstance(t, Element):
        if depth < 1 or width < 1:
            return None
        content = sample_value(sig, t.content, depth - 1, width, strings)
        return None if content is None else (Node(t.label, content),)
    if isinstance(t, Or):
        left = sample_value(sig, t.left, depth, width, strings)
        if left is not None:
            return left
        return sample_value(sig, t.right, depth, width, strings)
    if isinstance(t, Seq):
        left = sample_value(sig, t.left, depth, width, strings)
        right = sample_value(sig, t.right, depth, width, strings)
        if left is None or right is None or len(left) + len(right) > width:
            return None
        return left + right
    if isinstance(t, Star):
        return ()
    assert isinstance(t, Var)
    return sample_value(sig, sig.definition(t.name), depth, width, strings)


@dataclass(frozen=True)
class RefutedWith:
    """A concrete value of the left type that is not a value of the right."""

    counterexample: Forest


@dataclass(frozen=True)
class ConsistentUpTo:
    depth: int
    width: int


OracleVerdict = RefutedWith | ConsistentUpTo


def subtype_oracle(sig: Signature, t1: Type, t2: Type, depth: int, width: int,
                   strings: tuple[str, ...] = DEFAULT_STRINGS) -> OracleVerdict:
    """Exhaustively search ``t1``'s bounded values for one outside ``t2``."""
    for v in sorted(values_upto(sig, t1, depth, width, strings),
                    key=lambda f: (len(f), repr(f))):
        if not member(sig, v, t2):
            return RefutedWith(v)
    return ConsistentUpTo(depth, width)


def types_upto(size: int, labels: tuple[str, ...],
               with_base_atoms: bool = False) -> list[Type]:
    """All types of AST size ≤ ``size`` built from ``()`` and the given labels.

    Size counts constructor nodes: ``()`` is 1, ``n[t]`` is 1 + size(t),
    ``|``/``,`` are 1 + both sides, ``*`` is 1 + inner.  With
    ``with_base_atoms`` the ``bool``/``string`` atoms (size 1) are included.
    """
    by_size: dict[int, list[Type]] = {0: []}
    for s in range(1, size + 1):
        out: list[Type] = []
        if s == 1:
            out.append(EMPTY)
            if with_base_atoms:
                out.append(BoolAtom())
                out.append(StringAtom())
        for inner in by_size.get(s - 1, []):
            for lab in labels:
                out.append(Element(lab, inner))
            out.append(Star(inner))
        for ls in range(1, s - 1):
            for left in by_size[ls]:
                for right in by_size[s - 1 - ls]:
                    out.append(Or(left, right))
                    out.append(Seq(left, right))
        by_size[s] = out
    result: list[Type] = []
    for s in range(1, size + 1):
        result.extend(by_size[s])
    return result
