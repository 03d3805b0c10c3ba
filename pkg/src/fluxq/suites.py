"""Executable property suites: the package's invariants and the language
laws behind them, checked at desk scale.

Infinite claims (language equalities, subtype closure) are checked against
explicit finite universes and length/depth bounds; decision procedures are
cross-checked against exhaustive enumeration.  Failures carry the smallest
counterexample found by greedy shrinking.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .enumeration import (
    sample_value, types_upto, values_upto, word_to_type, words_upto,
)
from .errors import EvalError, GenerationError, TypeCheckFailure
from .evaluator import Runtime, apply_update, eval_query
from .generators import (
    GenConfig, gen_env, gen_sub_env, gen_subtype_of, gen_type,
    gen_typed_expr, gen_typed_stmt,
)
from .printer import type_str, value_str
from .queries import filter_label, synth_expr, synth_for
from .subtyping import (
    BoolTest, LabelTest, StringTest, WildcardTest, atom_subtype, subtype,
    test_subtype,
)
from .types import (
    Atom, BOOL, Element, Empty, EMPTY, EMPTY_DECLS, Or, Seq, Signature, Star,
    STRING, TreeBinding, Type, Var, syntactic_atoms,
)
from .unparse import expr_str, stmt_str
from .updates import Multiplicity, Nav, Direction, SeqStmt, Skip, synth_iter, synth_stmt
from .values import BoolVal, Forest, Node, StrVal, member


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f", {self.skipped} skipped" if self.skipped else ""
        out = f"{status} {self.name} ({self.cases} cases{extra})"
        if self.failures:
            out += f"\n  first failure: {self.failures[0]}"
        return out


@dataclass
class SuiteReport:
    results: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def summary(self) -> str:
        lines = [r.line() for r in self.results]
        total = sum(r.cases for r in self.results)
        bad = sum(len(r.failures) for r in self.results)
        lines.append(f"{'OK' if self.ok else 'FAILURES'}: "
                     f"{len(self.results)} suites, {total} cases, {bad} failures")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "suites": [{"name": r.name, "cases": r.cases,
                        "failures": r.failures, "skipped": r.skipped}
                       for r in self.results],
        }


def _suite_rng(cfg: GenConfig, name: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{name}")


# -- greedy shrinking ---------------------------------------------------


def shrink_type(t: Type) -> Iterator[Type]:
    """One-step-smaller candidates for ``t``."""
    if not isinstance(t, Empty):
        yield EMPTY
    if isinstance(t, (Or, Seq)):
        yield t.left
        yield t.right
        for c in shrink_type(t.left):
            yield type(t)(c, t.right)
        for c in shrink_type(t.right):
            yield type(t)(t.left, c)
    elif isinstance(t, Star):
        yield t.inner
        for c in shrink_type(t.inner):
            yield Star(c)
    elif isinstance(t, Element):
        for c in shrink_type(t.content):
            yield Element(t.label, c)


def greedy_shrink(value, fails: Callable, candidates: Callable) -> object:
    """Repeatedly replace ``value`` by any one-step candidate that still
    fails, until none does."""
    changed = True
    budget = 500
    while changed and budget > 0:
        changed = False
        for c in candidates(value):
            budget -= 1
            try:
                still = fails(c)
            except Exception:
                still = False
            if still:
                value = c
                changed = True
                break
    return value


def shrink_type_pair(pair: tuple[Type, Type],
                     fails: Callable[[tuple[Type, Type]], bool]) -> tuple[Type, Type]:
    def candidates(p):
        t1, t2 = p
        for c in shrink_type(t1):
            yield (c, t2)
        for c in shrink_type(t2):
            yield (t1, c)
    return greedy_shrink(pair, fails, candidates)  # type: ignore[return-value]


# -- fixture signature ---------------------------------------------------


def fixture_signature(cfg: GenConfig) -> Signature:
    """A small recursive signature over the configured labels."""
    a, b = cfg.labels[0], cfg.labels[1 % len(cfg.labels)]
    return Signature({
        "List": Or(Element(a, EMPTY),
                   Element(b, Seq(Element(a, EMPTY), Var("List")))),
        "Tree": Element("tree", Or(Element("leaf", STRING),
                                   Element("node", Star(Var("Tree"))))),
    })


# -- core-model suites ---------------------------------------------------


def suite_member_respects_subtyping(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("member-respects-subtyping")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        t2 = gen_type(rng, cfg, sig=sig)
        t1 = gen_subtype_of(rng, sig, t2)
        values = sorted(values_upto(sig, t1, cfg.depth, cfg.width),
                        key=repr)[:20]
        res.cases += 1
        for v in values:
            if not member(sig, v, t2):
                def fails(p):
                    s, u = p
                    return (subtype(sig, s, u)
                            and any(not member(sig, w, u)
                                    for w in values_upto(sig, s, cfg.depth,
                                                         cfg.width)))
                small = shrink_type_pair((t1, t2), fails)
                res.failures.append(
                    f"value {value_str(v)} of {type_str(small[0])} is not a "
                    f"member of supertype {type_str(small[1])}")
                break
    return res


def suite_values_have_atomic_witnesses(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("values-have-atomic-witnesses")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        t = gen_type(rng, cfg, size=min(cfg.max_size, 5), sig=sig)
        universe = syntactic_atoms(sig, t)
        values = sorted(values_upto(sig, t, cfg.depth, cfg.width), key=repr)[:12]
        res.cases += 1
        for v in values:
            words = [w for w in words_upto(sig, t, len(v), universe)
                     if len(w) == len(v)]
            if not any(member(sig, v, word_to_type(w)) for w in words):
                res.failures.append(
                    f"no atomic word of {type_str(t)} covers {value_str(v)}")
                break
    return res


def suite_words_monotone(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("words-monotone-in-bounds")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        t = gen_type(rng, cfg, size=min(cfg.max_size, 5), sig=sig)
        universe = syntactic_atoms(sig, t)
        res.cases += 1
        for k in range(3):
            smaller = words_upto(sig, t, k, universe)
            larger = words_upto(sig, t, k + 1, universe)
            if not smaller <= larger:
                res.failures.append(
                    f"words of {type_str(t)} not monotone at k={k}")
                break
        if universe:
            sub_universe = frozenset(sorted(universe, key=repr)[:-1])
            if not (words_upto(sig, t, 3, sub_universe)
                    <= words_upto(sig, t, 3, universe)):
                res.failures.append(
                    f"words of {type_str(t)} not monotone in the universe")
    return res


def suite_atoms_compatible(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("atoms-compatible-under-subtyping")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        t = gen_type(rng, cfg, sig=sig)
        t_sub = gen_subtype_of(rng, sig, t)
        upper = syntactic_atoms(sig, t)
        res.cases += 1
        for atom in syntactic_atoms(sig, t_sub):
            if not any(atom_subtype(sig, atom, top) for top in upper):
                res.failures.append(
                    f"atom {type_str(atom)} of subtype {type_str(t_sub)} is "
                    f"below no atom of {type_str(t)}")
                break
    return res


def suite_member_recursive_regression(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("member-terminates-on-recursive-signatures")
    fix = fixture_signature(cfg)
    tree = Var("Tree")
    samples = sorted(values_upto(fix, tree, 4, 3), key=repr)[:20]
    samples += [(), (BoolVal(True),), (Node("tree", ()),)]
    for v in samples:
        res.cases += 1
        member(fix, v, tree)  # must terminate; result value irrelevant here
        member(fix, v, Var("List"))
    lst = Var("List")
    good = (Node(cfg.labels[0], ()),)
    if not member(fix, good, lst):
        res.failures.append(f"{value_str(good)} should inhabit List")
    if member(fix, (), lst):
        res.failures.append("() should not inhabit List")
    return res


def suite_types_inhabited(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("types-inhabited-at-small-bounds")
    rng = _suite_rng(cfg, res.name)
    depth, width = cfg.max_nesting + 1, max(cfg.width, cfg.max_size)
    for _ in range(cfg.cases):
        t = gen_type(rng, cfg, sig=sig)
        res.cases += 1
        witness = sample_value(sig, t, depth, width)
        if witness is None or not member(sig, witness, t):
            small = greedy_shrink(
                t, lambda c: sample_value(sig, c, depth, width) is None,
                shrink_type)
            res.failures.append(f"no inhabitant found for {type_str(small)}")
    return res


# -- subtyping suites -----------------------------------------------------


def oracle_agreement(sig: Signature, labels: tuple[str, ...], size: int,
                     depth: int, width: int) -> SuiteResult:
    """Exhaustive: the subtype decision never disagrees with brute-force
    value enumeration, over all type pairs up to the given AST size."""
    res = SuiteResult("subtype-agrees-with-oracle")
    corpus = types_upto(size, labels)
    value_cache = {t: sorted(values_upto(sig, t, depth, width),
                             key=lambda f: (len(f), repr(f)))
                   for t in corpus}
    for t1 in corpus:
        for t2 in corpus:
            res.cases += 1
            decided = subtype(sig, t1, t2)
            refuted = next((v for v in value_cache[t1]
                            if not member(sig, v, t2)), None)
            if decided and refuted is not None:
                res.failures.append(
                    f"subtype said {type_str(t1)} <: {type_str(t2)} but "
                    f"{value_str(refuted)} refutes it")
            elif not decided and refuted is None:
                res.failures.append(
                    f"subtype refused {type_str(t1)} <: {type_str(t2)} but "
                    f"enumeration found no counterexample at depth {depth}, "
                    f"width {width}")
    return res


def suite_oracle_agreement(cfg: GenConfig, sig: Signature) -> SuiteResult:
    return oracle_agreement(sig, cfg.labels[:2], 4, cfg.depth, cfg.width)


def suite_subtype_reflexive(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("subtype-reflexive")
    rng = _suite_rng(cfg, res.name)
    for _ in range(max(cfg.cases, 1000)):
        t = gen_type(rng, cfg, sig=sig)
        res.cases += 1
        if not subtype(sig, t, t):
            small = greedy_shrink(t, lambda c: not subtype(sig, c, c),
                                  shrink_type)
            res.failures.append(f"{type_str(small)} not <: itself")
    return res


def suite_subtype_transitive(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("subtype-transitive")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        t3 = gen_type(rng, cfg, sig=sig)
        t2 = gen_subtype_of(rng, sig, t3)
        t1 = gen_subtype_of(rng, sig, t2)
        res.cases += 1
        if not subtype(sig, t1, t3):
            res.failures.append(
                f"chain broke: {type_str(t1)} <: {type_str(t2)} <: "
                f"{type_str(t3)} but not {type_str(t1)} <: {type_str(t3)}")
    return res


def suite_language_inclusion(cfg: GenConfig, sig: Signature) -> SuiteResult:
    """Bounded word languages: t1 <: t2 implies every bounded word of t1 is
    a bounded word of t2; a bounded refutation implies non-subtyping."""
    res = SuiteResult("language-inclusion-matches-subtype")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        t1 = gen_type(rng, cfg, size=min(cfg.max_size, 5), sig=sig)
        t2 = gen_type(rng, cfg, size=min(cfg.max_size, 5), sig=sig)
        universe = syntactic_atoms(sig, t1) | syntactic_atoms(sig, t2)
        res.cases += 1
        w1 = words_upto(sig, t1, 4, universe)
        w2 = words_upto(sig, t2, 4, universe)
        if subtype(sig, t1, t2) and not w1 <= w2:
            def fails(p):
                a, b = p
                u = syntactic_atoms(sig, a) | syntactic_atoms(sig, b)
                return (subtype(sig, a, b)
                        and not words_upto(sig, a, 4, u) <= words_upto(sig, b, 4, u))
            small = shrink_type_pair((t1, t2), fails)
            res.failures.append(
                f"{type_str(small[0])} <: {type_str(small[1])} but bounded "
                f"languages disagree")
    return res


def suite_test_subtype_semantic(cfg: GenConfig, sig: Signature) -> SuiteResult:
    """test_subtype(a, phi) iff every enumerated value of ``a`` passes phi."""
    res = SuiteResult("test-subtype-semantic")
    a, b = cfg.labels[0], cfg.labels[1 % len(cfg.labels)]
    atoms: list[Atom] = [BOOL, STRING, Element(a, EMPTY),
                         Element(a, Element(b, EMPTY)),
                         Element(b, Or(EMPTY, Element(a, EMPTY))),
                         Element(b, STRING)]
    tests = [BoolTest(), StringTest(), WildcardTest(), LabelTest(a), LabelTest(b)]

    def passes(tree, test) -> bool:
        if isinstance(test, BoolTest):
            return isinstance(tree, BoolVal)
        if isinstance(test, StringTest):
            return isinstance(tree, StrVal)
        if isinstance(test, WildcardTest):
            return isinstance(tree, Node)
        return isinstance(tree, Node) and tree.label == test.label

    for atom in atoms:
        for test in tests:
            res.cases += 1
            decided = test_subtype(atom, test)
            semantic = all(passes(v[0], test)
                           for v in values_upto(sig, atom, 3, 3))
            if decided != semantic:
                res.failures.append(
                    f"test_subtype({type_str(atom)}, {test!r}) = {decided} "
                    f"but semantics says {semantic}")
    return res


# -- query typing suites ---------------------------------------------------


def suite_query_deterministic(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("query-synthesis-deterministic")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        env = gen_env(rng, cfg, sig)
        try:
            e = gen_typed_expr(rng, cfg, EMPTY_DECLS, sig, env)
        except GenerationError:
            res.skipped += 1
            continue
        res.cases += 1
        first = synth_expr(EMPTY_DECLS, sig, env, e)
        second = synth_expr(EMPTY_DECLS, sig, env, e)
        if first != second:
            res.failures.append(f"synthesis not deterministic on {expr_str(e)}")
    return res


def query_downward_monotonicity(cfg: GenConfig, sig: Signature,
                                cases: int) -> SuiteResult:
    """Shrinking the environment (and the for-source type) keeps synthesis
    defined and shrinks its result."""
    res = SuiteResult("query-downward-monotone")
    rng = _suite_rng(cfg, res.name)
    while res.cases < cases:
        env = gen_env(rng, cfg, sig)
        try:
            e = gen_typed_expr(rng, cfg, EMPTY_DECLS, sig, env)
        except GenerationError:
            continue
        try:
            original = synth_expr(EMPTY_DECLS, sig, env, e)
        except TypeCheckFailure:
            continue
        shrunk_env = gen_sub_env(rng, sig, env)
        res.cases += 1
        try:
            shrunk = synth_expr(EMPTY_DECLS, sig, shrunk_env, e)
        except TypeCheckFailure as exc:
            res.failures.append(
                f"synthesis of {expr_str(e)} became undefined under a "
                f"shrunken environment: {exc.diagnostic.message}")
            continue
        if not subtype(sig, shrunk, original):
            res.failures.append(
                f"output of {expr_str(e)} grew: {type_str(shrunk)} not <: "
                f"{type_str(original)}")
            continue
        # for-iteration variant: additionally shrink the source type
        source_t = gen_type(rng, cfg, size=min(cfg.max_size, 5), sig=sig)
        try:
            body = gen_typed_expr(rng, cfg, EMPTY_DECLS, sig,
                                  {**env, "it": TreeBinding(BOOL)}, budget=2)
            base = synth_for(EMPTY_DECLS, sig, env, "it", source_t, body)
        except (GenerationError, TypeCheckFailure):
            continue
        narrower = gen_subtype_of(rng, sig, source_t)
        try:
            narrowed = synth_for(EMPTY_DECLS, sig, shrunk_env, "it",
                                 narrower, body)
        except TypeCheckFailure as exc:
            res.failures.append(
                f"iteration of {expr_str(body)} became undefined over "
                f"{type_str(narrower)} <: {type_str(source_t)}: "
                f"{exc.diagnostic.message}")
            continue
        if not subtype(sig, narrowed, base):
            res.failures.append(
                f"iteration output grew over {type_str(narrower)} <: "
                f"{type_str(source_t)}: {type_str(narrowed)} not <: "
                f"{type_str(base)}")
    return res


def suite_query_downward_monotone(cfg: GenConfig, sig: Signature) -> SuiteResult:
    return query_downward_monotonicity(cfg, sig, cfg.cases)


def for_homomorphism(cfg: GenConfig, sig: Signature, cases: int) -> SuiteResult:
    """synth_for maps (), atoms' regex structure, and variables
    homomorphically; checked as structural equalities."""
    res = SuiteResult("for-iteration-homomorphic")
    rng = _suite_rng(cfg, res.name)
    fix = fixture_signature(cfg)
    var = "it"
    while res.cases < cases:
        env = gen_env(rng, cfg, fix)
        t1 = gen_type(rng, cfg, size=4, sig=fix)
        t2 = gen_type(rng, cfg, size=4, sig=fix)
        try:
            body = gen_typed_expr(rng, cfg, EMPTY_DECLS, fix,
                                  {**env, var: TreeBinding(BOOL)}, budget=2)
            h = lambda t: synth_for(EMPTY_DECLS, fix, env, var, t, body)
            left_1, left_2 = h(t1), h(t2)
        except (GenerationError, TypeCheckFailure):
            continue
        res.cases += 1
        checks = [
            (h(Seq(t1, t2)), Seq(left_1, left_2), "concatenation"),
            (h(Or(t1, t2)), Or(left_1, left_2), "alternation"),
            (h(Star(t1)), Star(left_1), "star"),
            (h(EMPTY), EMPTY, "empty"),
        ]
        for got, want, label in checks:
            if got != want:
                res.failures.append(
                    f"{label} not homomorphic for body {expr_str(body)}: "
                    f"{type_str(got)} != {type_str(want)}")
                break
        else:
            message = _same_outcome(lambda: h(Var("List")),
                                    lambda: h(fix.definition("List")))
            if message:
                res.failures.append(
                    f"variable not homomorphic for body {expr_str(body)}: "
                    f"{message}")
    return res


def _same_outcome(left: Callable, right: Callable) -> str:
    """Empty string when both sides yield the same type or both fail."""
    try:
        got = left()
    except TypeCheckFailure:
        got = None
    try:
        want = right()
    except TypeCheckFailure:
        want = None
    if got == want:
        return ""
    show = lambda t: "undefined" if t is None else type_str(t)
    return f"{show(got)} != {show(want)}"


def suite_for_homomorphism(cfg: GenConfig, sig: Signature) -> SuiteResult:
    return for_homomorphism(cfg, sig, cfg.cases)


def suite_filter_total(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("filter-total")
    rng = _suite_rng(cfg, res.name)
    fix = fixture_signature(cfg)
    for _ in range(cfg.cases):
        t = gen_type(rng, cfg, sig=sig)
        res.cases += 1
        filter_label(sig, t, rng.choice(cfg.labels))
        filter_label(fix, Var(rng.choice(("List", "Tree"))),
                     rng.choice(cfg.labels))
    return res


def _conforming_envs(sig: Signature, env, depth: int, width: int,
                     cap: int = 6) -> Iterator[dict[str, Forest]]:
    """Up to ``cap`` value environments conforming to ``env``."""
    names = list(env)
    pools: list[list[Forest]] = []
    for name in names:
        binding = env[name]
        t = binding.atom if isinstance(binding, TreeBinding) else binding.type
        pool = sorted(values_upto(sig, t, depth, width), key=repr)
        if isinstance(binding, TreeBinding):
            pool = [v for v in pool if len(v) == 1]
        if not pool:
            return
        pools.append(pool[:3])
    count = 0
    def build(i: int, acc: dict[str, Forest]):
        nonlocal count
        if count >= cap:
            return
        if i == len(names):
            count += 1
            yield dict(acc)
            return
        for v in pools[i]:
            acc[names[i]] = v
            yield from build(i + 1, acc)
            if count >= cap:
                return
    yield from build(0, {})


def query_soundness(cfg: GenConfig, sig: Signature, cases: int) -> SuiteResult:
    """Evaluating a well-typed expression in a conforming environment yields
    a member of the synthesized type."""
    res = SuiteResult("query-soundness")
    rng = _suite_rng(cfg, res.name)
    rt = Runtime()
    while res.cases < cases:
        env = gen_env(rng, cfg, sig)
        try:
            e = gen_typed_expr(rng, cfg, EMPTY_DECLS, sig, env)
            synthesized = synth_expr(EMPTY_DECLS, sig, env, e)
        except (GenerationError, TypeCheckFailure):
            continue
        value_envs = list(_conforming_envs(sig, env, cfg.depth, cfg.width))
        if not value_envs:
            continue
        res.cases += 1
        for venv in value_envs:
            try:
                result = eval_query(rt, venv, e)
            except EvalError as exc:
                res.failures.append(
                    f"well-typed {expr_str(e)} crashed: {exc}")
                break
            if not member(sig, result, synthesized):
                res.failures.append(
                    f"{expr_str(e)} evaluated to {value_str(result)}, outside "
                    f"its synthesized type {type_str(synthesized)}")
                break
    return res


def suite_query_soundness(cfg: GenConfig, sig: Signature) -> SuiteResult:
    return query_soundness(cfg, sig, cfg.cases)


# -- update typing suites ---------------------------------------------------


def suite_update_deterministic(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("update-synthesis-deterministic")
    rng = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        t = gen_type(rng, cfg, size=5, sig=sig)
        try:
            s = gen_typed_stmt(rng, cfg, EMPTY_DECLS, sig, {},
                               Multiplicity.PLURAL, t)
        except GenerationError:
            res.skipped += 1
            continue
        res.cases += 1
        first = synth_stmt(EMPTY_DECLS, sig, {}, Multiplicity.PLURAL, t, s)
        second = synth_stmt(EMPTY_DECLS, sig, {}, Multiplicity.PLURAL, t, s)
        if first != second:
            res.failures.append(f"synthesis not deterministic on {stmt_str(s)}")
    return res


def update_downward_monotonicity(cfg: GenConfig, sig: Signature,
                                 cases: int) -> SuiteResult:
    res = SuiteResult("update-downward-monotone")
    rng = _suite_rng(cfg, res.name)
    while res.cases < cases:
        env = gen_env(rng, cfg, sig)
        t = gen_type(rng, cfg, size=5, sig=sig)
        try:
            s = gen_typed_stmt(rng, cfg, EMPTY_DECLS, sig, env,
                               Multiplicity.PLURAL, t)
            original = synth_stmt(EMPTY_DECLS, sig, env,
                                  Multiplicity.PLURAL, t, s)
        except (GenerationError, TypeCheckFailure):
            continue
        shrunk_env = gen_sub_env(rng, sig, env)
        narrower = gen_subtype_of(rng, sig, t)
        res.cases += 1
        try:
            shrunk = synth_stmt(EMPTY_DECLS, sig, shrunk_env,
                                Multiplicity.PLURAL, narrower, s)
        except TypeCheckFailure as exc:
            res.failures.append(
                f"{stmt_str(s)} became untypable from {type_str(narrower)} "
                f"<: {type_str(t)}: {exc.diagnostic.message}")
            continue
        if not subtype(sig, shrunk, original):
            res.failures.append(
                f"output of {stmt_str(s)} grew from {type_str(narrower)}: "
                f"{type_str(shrunk)} not <: {type_str(original)}")
    return res


def suite_update_downward_monotone(cfg: GenConfig, sig: Signature) -> SuiteResult:
    return update_downward_monotonicity(cfg, sig, cfg.cases)


def iter_homomorphism(cfg: GenConfig, sig: Signature, cases: int) -> SuiteResult:
    res = SuiteResult("iter-homomorphic")
    rng = _suite_rng(cfg, res.name)
    fix = fixture_signature(cfg)
    while res.cases < cases:
        env = gen_env(rng, cfg, fix)
        t1 = gen_type(rng, cfg, size=4, sig=fix)
        t2 = gen_type(rng, cfg, size=4, sig=fix)
        atoms = sorted(syntactic_atoms(fix, t1) | syntactic_atoms(fix, t2),
                       key=repr)
        focus = atoms[0] if atoms else BOOL
        try:
            body = gen_typed_stmt(rng, cfg, EMPTY_DECLS, fix, env,
                                  Multiplicity.SINGULAR, focus, budget=2)
            k = lambda t: synth_iter(EMPTY_DECLS, fix, env, t, body)
            left_1, left_2 = k(t1), k(t2)
        except (GenerationError, TypeCheckFailure):
            continue
        res.cases += 1
        checks = [
            (k(Seq(t1, t2)), Seq(left_1, left_2), "concatenation"),
            (k(Or(t1, t2)), Or(left_1, left_2), "alternation"),
            (k(Star(t1)), Star(left_1), "star"),
            (k(EMPTY), EMPTY, "empty"),
        ]
        for got, want, label in checks:
            if got != want:
                res.failures.append(
                    f"{label} not homomorphic for {stmt_str(body)}: "
                    f"{type_str(got)} != {type_str(want)}")
                break
        else:
            message = _same_outcome(lambda: k(Var("List")),
                                    lambda: k(fix.definition("List")))
            if message:
                res.failures.append(
                    f"variable not homomorphic for {stmt_str(body)}: {message}")
    return res


def suite_iter_homomorphism(cfg: GenConfig, sig: Signature) -> SuiteResult:
    return iter_homomorphism(cfg, sig, cfg.cases)


def update_soundness(cfg: GenConfig, sig: Signature, cases: int) -> SuiteResult:
    """Applying a well-typed update to a conforming input yields a member of
    the synthesized output type."""
    res = SuiteResult("update-soundness")
    rng = _suite_rng(cfg, res.name)
    rt = Runtime()
    while res.cases < cases:
        t = gen_type(rng, cfg, size=5, sig=sig)
        try:
            s = gen_typed_stmt(rng, cfg, EMPTY_DECLS, sig, {},
                               Multiplicity.PLURAL, t)
            out_t = synth_stmt(EMPTY_DECLS, sig, {}, Multiplicity.PLURAL, t, s)
        except (GenerationError, TypeCheckFailure):
            continue
        inputs = sorted(values_upto(sig, t, cfg.depth, cfg.width), key=repr)[:6]
        if not inputs:
            continue
        res.cases += 1
        for v in inputs:
            try:
                result = apply_update(rt, {}, v, s)
            except EvalError as exc:
                res.failures.append(
                    f"well-typed {stmt_str(s)} crashed on {value_str(v)}: {exc}")
                break
            if not member(sig, result, out_t):
                res.failures.append(
                    f"{stmt_str(s)} mapped {value_str(v)} to "
                    f"{value_str(result)}, outside {type_str(out_t)}")
                break
    return res


def suite_update_soundness(cfg: GenConfig, sig: Signature) -> SuiteResult:
    return update_soundness(cfg, sig, cfg.cases)


# -- evaluator law suites ---------------------------------------------------


def suite_evaluator_laws(cfg: GenConfig, sig: Signature) -> SuiteResult:
    """Skip is the identity; sequencing composes effects; iteration
    distributes over concatenation."""
    res = SuiteResult("evaluator-laws")
    rng = _suite_rng(cfg, res.name)
    rt = Runtime()
    while res.cases < cfg.cases:
        t = gen_type(rng, cfg, size=5, sig=sig)
        try:
            s1 = gen_typed_stmt(rng, cfg, EMPTY_DECLS, sig, {},
                                Multiplicity.PLURAL, t)
            mid_t = synth_stmt(EMPTY_DECLS, sig, {}, Multiplicity.PLURAL, t, s1)
            s2 = gen_typed_stmt(rng, cfg, EMPTY_DECLS, sig, {},
                                Multiplicity.PLURAL, mid_t)
        except (GenerationError, TypeCheckFailure):
            continue
        values = sorted(values_upto(sig, t, cfg.depth, cfg.width), key=repr)[:4]
        if not values:
            continue
        res.cases += 1
        for v in values:
            try:
                if apply_update(rt, {}, v, Skip()) != v:
                    res.failures.append(f"skip changed {value_str(v)}")
                    break
                composed = apply_update(rt, {}, v, SeqStmt(s1, s2))
                staged = apply_update(rt, {}, apply_update(rt, {}, v, s1), s2)
                if composed != staged:
                    res.failures.append(
                        f"sequencing is not composition on {value_str(v)}")
                    break
                atoms = sorted(syntactic_atoms(sig, t), key=repr)
                if atoms:
                    body = gen_typed_stmt(rng, cfg, EMPTY_DECLS, sig, {},
                                          Multiplicity.SINGULAR, atoms[0],
                                          budget=1)
                    cut = rng.randint(0, len(v))
                    whole = apply_update(rt, {}, v, Nav(Direction.ITER, body))
                    parts = (apply_update(rt, {}, v[:cut], Nav(Direction.ITER, body))
                             + apply_update(rt, {}, v[cut:], Nav(Direction.ITER, body)))
                    if whole != parts:
                        res.failures.append(
                            f"iter does not distribute over concatenation "
                            f"on {value_str(v)}")
                        break
            except (EvalError, GenerationError):
                break
    return res


# -- appendix: language/filter commutation ----------------------------------


def _top_level_atom_occurrences(sig: Signature, t: Type,
                                seen: frozenset[str] = frozenset()) -> int:
    if isinstance(t, Atom):
        return 1
    if isinstance(t, (Or, Seq)):
        return (_top_level_atom_occurrences(sig, t.left, seen)
                + _top_level_atom_occurrences(sig, t.right, seen))
    if isinstance(t, Star):
        return _top_level_atom_occurrences(sig, t.inner, seen)
    if isinstance(t, Var):
        if t.name in seen:
            return 0
        return _top_level_atom_occurrences(sig, sig.definition(t.name),
                                           seen | {t.name})
    return 0


def _star_count(sig: Signature, t: Type,
                seen: frozenset[str] = frozenset()) -> int:
    if isinstance(t, Star):
        return 1 + _star_count(sig, t.inner, seen)
    if isinstance(t, (Or, Seq)):
        return _star_count(sig, t.left, seen) + _star_count(sig, t.right, seen)
    if isinstance(t, Var):
        if t.name in seen:
            return 0
        return _star_count(sig, sig.definition(t.name), seen | {t.name})
    return 0


def commutation_case(sig: Signature, t: Type, label: str, k: int,
                     universe: frozenset[Atom] | None = None) -> tuple[bool, str]:
    """Bounded check that filtering commutes with the word language:
    the union of bounded languages of filtered words of ``t`` equals the
    bounded language of the filtered type.

    Filtering only shortens words, so the source side must be enumerated to
    a longer bound: length k plus the letters a witness may lose, bounded by
    the top-level atom occurrences once per star iteration (at most k per
    star) plus once outside.
    """
    if universe is None:
        universe = syntactic_atoms(sig, t)
    atom_occurrences = _top_level_atom_occurrences(sig, t)
    stars = _star_count(sig, t)
    source_bound = k + atom_occurrences * (1 + k * max(stars, 1))
    filtered = filter_label(sig, t, label)
    rhs = {w for w in words_upto(sig, filtered, k, universe)}
    lhs: set = set()
    for word in words_upto(sig, t, source_bound, universe):
        image = filter_label(sig, word_to_type(word), label)
        lhs |= {w for w in words_upto(sig, image, k, universe)}
    if lhs == rhs:
        return True, ""
    missing = sorted(rhs - lhs, key=repr)[:1]
    extra = sorted(lhs - rhs, key=repr)[:1]
    return False, (f"filter {label} on {type_str(t)}: sides differ "
                   f"(missing {missing!r}, extra {extra!r})")


def filter_commutation(sig: Signature, labels: tuple[str, ...], size: int,
                       k: int) -> SuiteResult:
    res = SuiteResult("filter-commutes-with-language")
    for t in types_upto(size, labels[:2]):
        for label in labels[:2]:
            res.cases += 1
            ok, message = commutation_case(sig, t, label, k)
            if not ok:
                res.failures.append(message)
    return res


def suite_filter_commutation(cfg: GenConfig, sig: Signature) -> SuiteResult:
    from .parser import parse_type
    res = filter_commutation(sig, cfg.labels, 4, 3)
    worked = parse_type("b[]*,c[]?")
    universe = frozenset((Element("b", EMPTY), Element("c", EMPTY)))
    res.cases += 1
    ok, message = commutation_case(sig, worked, "b", 3, universe)
    if not ok:
        res.failures.append(message)
    return res


# -- generator self-checks ---------------------------------------------------


def suite_generator_self_checks(cfg: GenConfig, sig: Signature) -> SuiteResult:
    res = SuiteResult("generator-self-checks")
    rng1 = _suite_rng(cfg, res.name)
    rng2 = _suite_rng(cfg, res.name)
    for _ in range(cfg.cases):
        res.cases += 1
        t1 = gen_type(rng1, cfg)
        t2 = gen_type(rng2, cfg)
        if t1 != t2:
            res.failures.append("generation is not reproducible under a "
                                "fixed seed")
            break
        narrowed = gen_subtype_of(rng1, sig, t1)
        gen_subtype_of(rng2, sig, t2)
        if not subtype(sig, narrowed, t1):
            res.failures.append(
                f"gen_subtype_of emitted non-subtype {type_str(narrowed)} "
                f"of {type_str(t1)}")
    return res


ALL_SUITES: list[Callable[[GenConfig, Signature], SuiteResult]] = [
    suite_member_respects_subtyping,
    suite_values_have_atomic_witnesses,
    suite_words_monotone,
    suite_atoms_compatible,
    suite_member_recursive_regression,
    suite_types_inhabited,
    suite_oracle_agreement,
    suite_subtype_reflexive,
    suite_subtype_transitive,
    suite_language_inclusion,
    suite_test_subtype_semantic,
    suite_query_deterministic,
    suite_query_downward_monotone,
    suite_for_homomorphism,
    suite_filter_total,
    suite_query_soundness,
    suite_update_deterministic,
    suite_update_downward_monotone,
    suite_iter_homomorphism,
    suite_update_soundness,
    suite_evaluator_laws,
    suite_filter_commutation,
    suite_generator_self_checks,
]


def run_suites(cfg: GenConfig, sig: Signature | None = None) -> SuiteReport:
    """Run every property suite and collect a report."""
    sig = sig if sig is not None else fixture_signature(cfg)
    return SuiteReport([suite(cfg, sig) for suite in ALL_SUITES])
