"""Semantic membership and the bounded enumeration functions.

``values_upto`` is cross-checked against an independent brute-force oracle
that enumerates every forest within bounds and filters by ``member``."""

from itertools import product

import pytest

from fluxq import (
    BoolVal, Element, EMPTY, EMPTY_SIGNATURE, Node, Signature, StrVal,
    UndeclaredVariable, Var, member, parse_type, parse_value, values_upto,
    word_to_type, words_upto,
)
from fluxq.values import forest_depth, max_width

TREE_SIG = Signature({"Tree": parse_type("tree[leaf[string] | node[Tree*]]")})
LIST_SIG = Signature({"X": parse_type("nil[] | cons[a[], X]")})


def brute_forests(labels, strings, depth, width):
    """Every forest within the bounds, by exhaustive construction."""
    if depth <= 0:
        return [()]
    trees = [BoolVal(True), BoolVal(False)]
    trees += [StrVal(s) for s in strings]
    for label in labels:
        for child in brute_forests(labels, strings, depth - 1, width):
            trees.append(Node(label, child))
    out = [()]
    for n in range(1, width + 1):
        out.extend(tuple(c) for c in product(trees, repeat=n))
    return out


class TestMember:
    def test_empty_in_empty(self):
        assert member(EMPTY_SIGNATURE, (), EMPTY)

    def test_single_tree_against_star_option(self):
        t = parse_type("b[]*,c[]?")
        assert member(EMPTY_SIGNATURE, parse_value("b[]"), t)
        assert member(EMPTY_SIGNATURE, parse_value("b[],b[],c[]"), t)
        assert member(EMPTY_SIGNATURE, (), t)
        assert not member(EMPTY_SIGNATURE, parse_value("c[],b[]"), t)

    def test_string_is_not_bool(self):
        assert not member(EMPTY_SIGNATURE, parse_value('"hi"'), parse_type("bool"))
        assert member(EMPTY_SIGNATURE, parse_value('"hi"'), parse_type("string"))

    def test_recursive_unfolding(self):
        assert member(TREE_SIG, parse_value('tree[leaf["x"]]'), Var("Tree"))
        assert not member(TREE_SIG, parse_value("tree[]"), Var("Tree"))
        deep = parse_value('tree[node[tree[leaf["a"]],tree[node[]]]]')
        assert member(TREE_SIG, deep, Var("Tree"))

    def test_list_signature(self):
        assert member(LIST_SIG, parse_value("cons[a[],cons[a[],nil[]]]"),
                      Var("X"))
        assert not member(LIST_SIG, parse_value("cons[a[]]"), Var("X"))

    def test_nullable_star_body_terminates(self):
        t = parse_type("(()|a[])*")
        assert member(EMPTY_SIGNATURE, parse_value("a[],a[]"), t)
        assert member(EMPTY_SIGNATURE, (), t)
        assert not member(EMPTY_SIGNATURE, parse_value("b[]"), t)

    def test_undeclared_variable(self):
        with pytest.raises(UndeclaredVariable):
            member(EMPTY_SIGNATURE, (), Var("Nope"))


class TestValuesUpto:
    def test_empty_type(self):
        assert values_upto(EMPTY_SIGNATURE, EMPTY, 2, 2) == {()}

    def test_single_element(self):
        assert values_upto(EMPTY_SIGNATURE, parse_type("a[]"), 2, 2) == {
            (Node("a", ()),)}

    def test_bool(self):
        assert values_upto(EMPTY_SIGNATURE, parse_type("bool"), 1, 1) == {
            (BoolVal(True),), (BoolVal(False),)}

    def test_star_truncates_at_width(self):
        vs = values_upto(EMPTY_SIGNATURE, parse_type("a[]*"), 1, 2)
        assert vs == {(), (Node("a", ()),), (Node("a", ()), Node("a", ()))}

    def test_depth_bound_prunes_nesting(self):
        vs = values_upto(EMPTY_SIGNATURE, parse_type("a[a[]]"), 1, 3)
        assert vs == frozenset()

    @pytest.mark.parametrize("text", [
        "()", "a[]", "bool", "string", "a[]*", "b[]*,c[]?", "a[b[]?]",
        "(a[]|b[])*", "a[],(b[]|string)", "a[bool]*",
    ])
    def test_agrees_with_brute_force(self, text):
        t = parse_type(text)
        depth, width = 2, 2
        expected = {v for v in brute_forests(("a", "b", "c"), ("", "a"),
                                             depth, width)
                    if member(EMPTY_SIGNATURE, v, t)
                    and forest_depth(v) <= depth and max_width(v) <= width}
        assert values_upto(EMPTY_SIGNATURE, t, depth, width) == expected

    def test_recursive_signature(self):
        vs = values_upto(TREE_SIG, Var("Tree"), 3, 2)
        assert parse_value('tree[leaf[""]]') in vs
        assert parse_value("tree[node[]]") in vs
        assert all(member(TREE_SIG, v, Var("Tree")) for v in vs)


class TestWordsUpto:
    U = frozenset({Element("b", EMPTY), Element("c", EMPTY)})

    def test_single_atom(self):
        a = Element("a", EMPTY)
        assert words_upto(EMPTY_SIGNATURE, a, 1, frozenset({a})) == {(a,)}

    def test_star_closure_truncated(self):
        a = Element("a", EMPTY)
        words = words_upto(EMPTY_SIGNATURE, parse_type("a[]*"), 2,
                           frozenset({a}))
        assert words == {(), (a,), (a, a)}

    def test_enumerates_all_short_subtype_words(self):
        b, c = Element("b", EMPTY), Element("c", EMPTY)
        words = words_upto(EMPTY_SIGNATURE, parse_type("b[]*,c[]?"), 2, self.U)
        assert words == {(), (b,), (c,), (b, b), (b, c)}

    def test_universe_atoms_below_syntactic_atoms(self):
        narrow = Element("a", parse_type("b[]"))
        wide = Element("a", parse_type("b[]|c[]"))
        words = words_upto(EMPTY_SIGNATURE, wide, 1, frozenset({narrow}))
        assert words == {(), (narrow,)} - {()}

    def test_word_to_type_round_trip_membership(self):
        b, c = Element("b", EMPTY), Element("c", EMPTY)
        t = word_to_type((b, c))
        assert member(EMPTY_SIGNATURE, parse_value("b[],c[]"), t)
        assert not member(EMPTY_SIGNATURE, parse_value("c[],b[]"), t)
