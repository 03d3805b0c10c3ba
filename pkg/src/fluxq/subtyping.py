"""Structural subtyping: language inclusion of regular-expression types.

``subtype(sig, t1, t2)`` decides whether every value of ``t1`` is a value of
``t2``.  The decision works on goals of the form ``t ⊆ u1 | ... | un``:

* decompose the left side into its head atoms with continuations
  (a linear form, unfolding variables at the top);
* for a head element ``n[c]`` with continuation ``k``, gather the right
  sides' same-label heads ``n[c_j]`` with continuations ``k_j`` and require,
  for every subset S of them, that ``c`` is included in the contents chosen
  by S or ``k`` is included in the continuations of the complement (the
  standard product decomposition for unions of concatenations);
* goals already on the call path are assumed to hold (coinduction), which
  makes recursive signatures terminate; refuted goals are memoized.

The hypothesis set lives inside a single invocation; the functions here are
pure and safe to call concurrently.

Types are assumed inhabited.  Every type built from ``bool``, ``string``,
elements, ``()``, ``|``, ``,`` and ``*`` is inhabited unless a recursive
definition forces infinite values (e.g. ``X = cons[X]``); such vacuous
signatures are outside the contract and no emptiness check is performed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .types import (
    Atom, BoolAtom, Element, Empty, EMPTY, ForestBinding, Or, Seq, Signature,
    Star, StringAtom, TreeBinding, Type, TypeEnv, Var, check_type_declared,
)


@dataclass(frozen=True)
class LabelTest:
    label: str


@dataclass(frozen=True)
class WildcardTest:
    pass


@dataclass(frozen=True)
class BoolTest:
    pass


@dataclass(frozen=True)
class StringTest:
    pass


TestKind = LabelTest | WildcardTest | BoolTest | StringTest

WILDCARD = WildcardTest()


def test_subtype(atom: Atom, test: TestKind) -> bool:
    """Atom-vs-test subtyping: does every value of ``atom`` pass ``test``?"""
    if isinstance(test, BoolTest):
        return isinstance(atom, BoolAtom)
    if isinstance(test, StringTest):
        return isinstance(atom, StringAtom)
    if isinstance(test, WildcardTest):
        return isinstance(atom, Element)
    return isinstance(atom, Element) and atom.label == test.label


def _seq(left: Type, right: Type) -> Type:
    """Concatenation with unit elimination, for canonical goal keys."""
    if isinstance(left, Empty):
        return right
    if isinstance(right, Empty):
        return left
    return Seq(left, right)




_SELF_CONTAINED = 1 << 30


class _Inclusion:
    """One inclusion check; holds the per-invocation caches.

    Goals on the call path are assumed to hold (coinduction).  A completed
    goal is cached: refuted goals unconditionally (a failure under
    optimistic assumptions is a genuine failure), proven goals only when
    their proof never reached back into the call path, tracked by the
    lowest path depth a subproof touched."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.path_depth: dict[tuple[Type, frozenset[Type]], int] = {}
        self.proven: set[tuple[Type, frozenset[Type]]] = set()
        self.refuted: set[tuple[Type, frozenset[Type]]] = set()
        # goals proven under assumptions still on the path, keyed to the
        # lowest depth they depend on; discarded when an enclosing goal
        # fails, committed when an enclosing goal closes self-contained
        self.pending: list[tuple[tuple[Type, frozenset[Type]], int]] = []
        self.pending_low: dict[tuple[Type, frozenset[Type]], int] = {}
        self._nullable: dict[Type, bool] = {}
        self._lf: dict[Type, tuple[tuple[Atom, Type], ...]] = {}
        # interning tables: memo keys become identical objects, so set and
        # dict lookups take the identity fast path instead of deep equality
        self._canon: dict[Type, Type] = {}
        self._canon_rights: dict[frozenset[Type], frozenset[Type]] = {}

    def canon(self, t: Type) -> Type:
        return self._canon.setdefault(t, t)

    def union(self, types) -> frozenset[Type]:
        """Canonical right-hand side of a goal: alternations flattened into
        the set, so ``{u|v}`` and ``{u, v}`` share one memo entry."""
        out: set[Type] = set()
        stack = list(types)
        while stack:
            t = stack.pop()
            if isinstance(t, Or):
                stack.append(t.left)
                stack.append(t.right)
            else:
                out.add(self.canon(t))
        rights = frozenset(out)
        return self._canon_rights.setdefault(rights, rights)

    def nullable(self, t: Type) -> bool:
        cached = self._nullable.get(t)
        if cached is not None:
            return cached
        if isinstance(t, (Empty, Star)):
            out = True
        elif isinstance(t, Atom):
            out = False
        elif isinstance(t, Or):
            out = self.nullable(t.left) or self.nullable(t.right)
        elif isinstance(t, Seq):
            out = self.nullable(t.left) and self.nullable(t.right)
        else:
            assert isinstance(t, Var)
            out = self.nullable(self.sig.definition(t.name))
        self._nullable[t] = out
        return out

    def linear_form(self, t: Type) -> tuple[tuple[Atom, Type], ...]:
        """Head atoms of ``t`` with their continuations."""
        cached = self._lf.get(t)
        if cached is not None:
            return cached
        pairs: list[tuple[Atom, Type]]
        if isinstance(t, Empty):
            pairs = []
        elif isinstance(t, Atom):
            pairs = [(t, EMPTY)]
        elif isinstance(t, Or):
            pairs = list(self.linear_form(t.left))
            pairs += [p for p in self.linear_form(t.right) if p not in pairs]
        elif isinstance(t, Seq):
            pairs = [(a, self.canon(_seq(k, t.right)))
                     for a, k in self.linear_form(t.left)]
            if self.nullable(t.left):
                pairs += [p for p in self.linear_form(t.right) if p not in pairs]
        elif isinstance(t, Star):
            pairs = [(a, self.canon(_seq(k, t)))
                     for a, k in self.linear_form(t.inner)]
        else:
            assert isinstance(t, Var)
            pairs = list(self.linear_form(self.sig.definition(t.name)))
        out = tuple(pairs)
        self._lf[t] = out
        return out

    def check(self, t: Type, rights) -> bool:
        return self._check(self.canon(t), self.union(rights))[0]

    def _check(self, t: Type, rights: frozenset[Type]) -> tuple[bool, int]:
        """Decide the goal; also report the lowest path depth its proof
        reached (``_SELF_CONTAINED`` when it used no assumption).

        Every successful subproof's depth is folded into the caller's, so
        when a goal closes at its own depth the whole strongly connected
        cluster proven beneath it is committed at once; a failing goal
        discards the cluster instead, since those proofs may have assumed
        it."""
        if t in rights:
            return True, _SELF_CONTAINED
        key = (t, rights)
        depth = self.path_depth.get(key)
        if depth is not None:
            return True, depth
        if key in self.proven:
            return True, _SELF_CONTAINED
        if key in self.refuted:
            return False, _SELF_CONTAINED
        reusable = self.pending_low.get(key)
        if reusable is not None:
            return True, reusable
        my_depth = len(self.path_depth)
        self.path_depth[key] = my_depth
        mark = len(self.pending)
        try:
            ok, low = self._check_body(t, rights)
        finally:
            del self.path_depth[key]
        if not ok:
            self._drop_pending(mark)
            self.refuted.add(key)
            return False, _SELF_CONTAINED
        if low >= my_depth:
            self.proven.add(key)
            for done, _ in self.pending[mark:]:
                self.proven.add(done)
                del self.pending_low[done]
            del self.pending[mark:]
            return True, _SELF_CONTAINED
        self.pending.append((key, low))
        self.pending_low[key] = low
        return True, low

    def _drop_pending(self, mark: int) -> None:
        for done, _ in self.pending[mark:]:
            del self.pending_low[done]
        del self.pending[mark:]

    def _check_body(self, t: Type, rights: frozenset[Type]) -> tuple[bool, int]:
        if self.nullable(t) and not any(self.nullable(u) for u in rights):
            return False, _SELF_CONTAINED
        right_heads: list[tuple[Atom, Type]] = []
        for u in rights:
            for pair in self.linear_form(u):
                if pair not in right_heads:
                    right_heads.append(pair)
        low = _SELF_CONTAINED
        for head, cont in self.linear_form(t):
            if isinstance(head, Element):
                ok, sub_low = self._check_element_head(head, cont, right_heads)
            else:
                kind = type(head)
                conts = self.union(k for a, k in right_heads if isinstance(a, kind))
                ok, sub_low = (self._check(cont, conts) if conts
                               else (False, _SELF_CONTAINED))
            if not ok:
                return False, _SELF_CONTAINED
            low = min(low, sub_low)
        return True, low

    def _check_element_head(self, head: Element, cont: Type,
                            right_heads: list[tuple[Atom, Type]]) -> tuple[bool, int]:
        same_label = list(dict.fromkeys(
            (a.content, k) for a, k in right_heads
            if isinstance(a, Element) and a.label == head.label))
        if not same_label:
            return False, _SELF_CONTAINED
        n = len(same_label)
        low = _SELF_CONTAINED
        for size in range(n + 1):
            for chosen in combinations(range(n), size):
                chosen_set = set(chosen)
                contents = self.union(same_label[i][0] for i in chosen_set)
                if contents:
                    ok, sub_low = self._check(head.content, contents)
                    if ok:
                        low = min(low, sub_low)
                        continue
                rest = self.union(same_label[i][1] for i in range(n)
                                  if i not in chosen_set)
                if rest:
                    ok, sub_low = self._check(cont, rest)
                    if ok:
                        low = min(low, sub_low)
                        continue
                return False, _SELF_CONTAINED
        return True, low


def subtype(sig: Signature, t1: Type, t2: Type) -> bool:
    """True iff the set of values of ``t1`` is included in that of ``t2``."""
    check_type_declared(sig, t1)
    check_type_declared(sig, t2)
    return _Inclusion(sig).check(t1, (t2,))


def atom_subtype(sig: Signature, a1: Atom, a2: Type) -> bool:
    """Subtyping between singular types.

    Accepts any type on the right so that an atom can be compared against a
    variable naming it (needed for recursive calls through a signature).
    """
    if isinstance(a2, Atom):
        if isinstance(a1, BoolAtom):
            return isinstance(a2, BoolAtom)
        if isinstance(a1, StringAtom):
            return isinstance(a2, StringAtom)
        if not isinstance(a2, Element) or a1.label != a2.label:
            return False
        return subtype(sig, a1.content, a2.content)
    return subtype(sig, a1, a2)


def env_subtype(sig: Signature, g1: TypeEnv, g2: TypeEnv) -> bool:
    """Pointwise subtyping of environments with equal domains."""
    if g1.keys() != g2.keys():
        return False
    for name, b1 in g1.items():
        b2 = g2[name]
        if isinstance(b1, TreeBinding) and isinstance(b2, TreeBinding):
            if not atom_subtype(sig, b1.atom, b2.atom):
                return False
        elif isinstance(b1, ForestBinding) and isinstance(b2, ForestBinding):
            if not subtype(sig, b1.type, b2.type):
                return False
        else:
            return False
    return True
