"""The subtype decision procedure against spot checks, the brute-force
oracle, and its preorder laws."""

import random

from fluxq import (
    BOOL, BoolTest, ConsistentUpTo, Element, EMPTY, EMPTY_SIGNATURE,
    ForestBinding, LabelTest, RefutedWith, Signature, STRING, StringTest,
    TreeBinding, Var, WildcardTest, atom_subtype, env_subtype, parse_type,
    parse_value, subtype, subtype_oracle, types_upto,
    values_upto, member,
)
from fluxq import test_subtype as passes_test
from fluxq.generators import GenConfig, gen_subtype_of, gen_type

E = EMPTY_SIGNATURE
TREE_SIG = Signature({"Tree": parse_type("tree[leaf[string] | node[Tree*]]")})


def sub(t1, t2, sig=E):
    return subtype(sig, parse_type(t1), parse_type(t2))


class TestSpotChecks:
    def test_precise_iteration_type_below_factored_type(self):
        assert sub("b[]*,c[]?", "(b[]|c[])*")
        assert not sub("(b[]|c[])*", "b[]*,c[]?")

    def test_double_below_star_but_not_single(self):
        assert sub("a[],a[]", "a[]*")
        assert not sub("a[],a[]", "a[]")

    def test_reflexive_samples(self):
        for text in ("()", "bool", "a[b[]*,c[]?]", "(a[]|b[])*", "Tree"):
            assert subtype(TREE_SIG, parse_type(text), parse_type(text))

    def test_leaves_body_below_ascription(self):
        assert sub("leaf[string],(leaf[string]*)*", "leaf[string]*")

    def test_option_below_widened_option(self):
        assert sub("c[]?", "c[]?|d[]*")

    def test_empty_only_below_nullable(self):
        assert sub("()", "a[]*")
        assert not sub("()", "a[]")
        assert sub("()|()", "()")

    def test_content_covered_by_union_of_same_label(self):
        assert sub("a[b[]?]", "a[()]|a[b[]]")
        assert sub("a[()]|a[b[]]", "a[b[]?]")
        assert not sub("a[b[]|c[]]", "a[b[]]")

    def test_base_atoms_are_disjoint(self):
        assert not sub("bool", "string")
        assert not sub("bool", "a[]")
        assert sub("bool", "bool|string")

    def test_recursive_signature(self):
        assert subtype(TREE_SIG, parse_type("tree[leaf[string]|node[Tree*]]"),
                       Var("Tree"))
        assert subtype(TREE_SIG, Var("Tree"),
                       parse_type("tree[leaf[string]|node[Tree*]]"))
        assert not subtype(TREE_SIG, parse_type("tree[]"), Var("Tree"))
        assert subtype(TREE_SIG, parse_type("Tree,Tree"), parse_type("Tree*"))

    def test_recursive_unrolling_equivalences(self):
        sig = Signature({"L": parse_type("nil[] | cons[a[], L]")})
        unrolled = parse_type("nil[] | cons[a[], (nil[]|cons[a[],L])]")
        assert subtype(sig, Var("L"), unrolled)
        assert subtype(sig, unrolled, Var("L"))
        assert subtype(sig, parse_type("cons[a[], L]"), Var("L"))
        assert not subtype(sig, Var("L"), parse_type("cons[a[], L]"))
        assert not subtype(sig, Var("L"), parse_type("nil[]|cons[a[],nil[]]"))


class TestAtomSubtype:
    def test_element_content_inclusion(self):
        assert atom_subtype(E, Element("n", parse_type("b[]")),
                            Element("n", parse_type("b[]|c[]")))

    def test_cross_kind_pairs_false(self):
        assert not atom_subtype(E, BOOL, STRING)
        assert not atom_subtype(E, BOOL, Element("b", EMPTY))
        assert not atom_subtype(E, Element("a", EMPTY), Element("b", EMPTY))

    def test_atom_below_type_variable(self):
        assert atom_subtype(TREE_SIG,
                            Element("tree", parse_type("leaf[string]|node[Tree*]")),
                            Var("Tree"))


class TestTestSubtype:
    def test_the_four_axioms(self):
        assert passes_test(BOOL, BoolTest())
        assert passes_test(STRING, StringTest())
        assert passes_test(Element("b", EMPTY), LabelTest("b"))
        assert passes_test(Element("b", parse_type("a[]*")), WildcardTest())

    def test_everything_else_false(self):
        assert not passes_test(BOOL, LabelTest("b"))
        assert not passes_test(BOOL, WildcardTest())
        assert not passes_test(STRING, BoolTest())
        assert not passes_test(Element("b", EMPTY), LabelTest("c"))
        assert not passes_test(Element("b", EMPTY), BoolTest())
        assert not passes_test(STRING, WildcardTest())


class TestEnvSubtype:
    def test_identical_envs(self):
        g = {"x": TreeBinding(Element("b", EMPTY))}
        assert env_subtype(E, g, g)

    def test_pointwise_widening(self):
        g1 = {"x": ForestBinding(parse_type("b[]"))}
        g2 = {"x": ForestBinding(parse_type("b[]|c[]"))}
        assert env_subtype(E, g1, g2)
        assert not env_subtype(E, g2, g1)

    def test_domain_mismatch(self):
        assert not env_subtype(E, {"x": ForestBinding(parse_type("b[]"))},
                               {"y": ForestBinding(parse_type("b[]"))})

    def test_binding_kind_mismatch(self):
        assert not env_subtype(E, {"x": TreeBinding(Element("b", EMPTY))},
                               {"x": ForestBinding(parse_type("b[]"))})


class TestSubtypeOracle:
    def test_refutes_double_below_single(self):
        verdict = subtype_oracle(E, parse_type("a[],a[]"), parse_type("a[]"),
                                 depth=1, width=2)
        assert verdict == RefutedWith(parse_value("a[],a[]"))

    def test_consistent_on_equal_empties(self):
        assert subtype_oracle(E, EMPTY, EMPTY, 2, 2) == ConsistentUpTo(2, 2)

    def test_consistent_on_true_inclusion(self):
        verdict = subtype_oracle(E, parse_type("b[]*,c[]?"),
                                 parse_type("(b[]|c[])*"), depth=2, width=3)
        assert isinstance(verdict, ConsistentUpTo)


class TestPerformanceGuards:
    def test_nested_star_alternations_decide_quickly(self):
        import time
        left = parse_type("((a[],b[])*|(b[],a[])*)*")
        right = parse_type("(a[]|b[])*")
        start = time.perf_counter()
        assert subtype(E, left, right)
        assert not subtype(E, right, left)
        words = parse_type("(a[],a[],b[],b[],a[])*")
        assert subtype(E, words, right)
        assert not subtype(E, right, words)
        assert time.perf_counter() - start < 2.0

    def test_deeply_nested_content_terminates(self):
        deep1 = parse_type("a[a[a[a[a[b[]*]]]]]")
        deep2 = parse_type("a[a[a[a[a[(b[]|c[])*]]]]]")
        assert subtype(E, deep1, deep2)
        assert not subtype(E, deep2, deep1)

    def test_symmetric_star_unions_decide_quickly(self):
        # these shapes used to re-prove one small goal cluster exponentially
        import time
        start = time.perf_counter()
        assert sub("(b[],b[b[]*]*|(),b[a[]],b[])*", "((),b[a[]],b[]|b[],b[b[]*]*)*")
        assert sub("(a[]*|a[bool])*,(b[b[]],(),b[]|a[string])",
                   "(a[]*|a[bool])*,b[b[]],(),b[]|(a[]*|a[bool])*,a[string]")
        assert sub("(a[]*|a[bool])*,b[b[]],(),b[]|(a[]*|a[bool])*,a[string]",
                   "(a[]*|a[bool])*,(b[b[]],(),b[]|a[string])")
        assert time.perf_counter() - start < 2.0


class TestAgreementWithOracle:
    def test_exhaustive_small(self):
        corpus = types_upto(3, ("a", "b"))
        for t1 in corpus:
            for t2 in corpus:
                decided = subtype(E, t1, t2)
                refuted = any(not member(E, v, t2)
                              for v in values_upto(E, t1, 3, 3))
                assert decided == (not refuted), (t1, t2)

    def test_random_preorder_laws(self):
        rng = random.Random(7)
        cfg = GenConfig(seed=7)
        for _ in range(300):
            t3 = gen_type(rng, cfg)
            t2 = gen_subtype_of(rng, E, t3)
            t1 = gen_subtype_of(rng, E, t2)
            assert subtype(E, t1, t1)
            assert subtype(E, t1, t3)

    def test_random_algebraic_inclusions(self):
        from fluxq import EMPTY, Element, Or, Seq, Star
        rng = random.Random(8)
        cfg = GenConfig(seed=8, max_size=5)
        for _ in range(150):
            t = gen_type(rng, cfg)
            u = gen_type(rng, cfg)
            assert subtype(E, t, Or(t, u))
            assert subtype(E, t, Star(t))
            assert subtype(E, Seq(Star(t), Star(t)), Star(t))
            assert subtype(E, Star(Star(t)), Star(t))
            assert subtype(E, Star(t), Star(Star(t)))
            assert subtype(E, Or(t, u), Or(u, t))
            assert subtype(E, Seq(t, EMPTY), t)
            assert subtype(E, Or(Star(t), Star(u)), Star(Or(t, u)))
            assert subtype(E, Element("a", t), Element("a", Or(t, u)))
