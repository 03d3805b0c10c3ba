"""Query expressions and their algorithmic typechecker.

Synthesis is subsumption-free and deterministic: every expression either has
a unique synthesized type or fails with a diagnostic.  Subtyping enters in
exactly two places, mirroring the declarative system's essential uses: at
function-call arguments and when checking an expression (or function body)
against an ascribed type.  Synthesized types are never simplified, so golden
tests can compare them structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Diagnostic, SourceSpan, error
from .errors import TypeCheckFailure, UndeclaredVariable
from .printer import type_str
from .subtyping import subtype
from .types import (
    Atom, BOOL, Element, Empty, EMPTY, ForestBinding, FunctionSig,
    GlobalDecls, Or, Seq, Signature, Star, STRING, TreeBinding, Type,
    TypeEnv, Var, check_type_declared,
)


@dataclass(frozen=True)
class QueryExpr:
    pass


@dataclass(frozen=True)
class EmptySeq(QueryExpr):
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Concat(QueryExpr):
    left: QueryExpr
    right: QueryExpr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Elem(QueryExpr):
    label: str
    content: QueryExpr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class StrLit(QueryExpr):
    value: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class BoolLit(QueryExpr):
    value: bool
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarRef(QueryExpr):
    name: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Let(QueryExpr):
    var: str
    bound: QueryExpr
    body: QueryExpr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class If(QueryExpr):
    cond: QueryExpr
    then: QueryExpr
    els: QueryExpr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Children(QueryExpr):
    """Child projection of a for-bound tree variable."""

    var: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class LabelFilter(QueryExpr):
    """Keep exactly the trees labeled ``label``, in order."""

    source: QueryExpr
    label: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class For(QueryExpr):
    var: str
    source: QueryExpr
    body: QueryExpr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call(QueryExpr):
    name: str
    args: tuple[QueryExpr, ...]
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    params: tuple[tuple[str, Type], ...]
    result: Type
    body: QueryExpr
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class QueryProgram:
    functions: tuple[FunctionDecl, ...]
    main: QueryExpr
    ascription: Type
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


def _fail(message: str, rule: str, span: SourceSpan | None = None):
    raise TypeCheckFailure(error(message, rule, span))


def filter_label(sig: Signature, t: Type, label: str) -> Type:
    """Type-level projection keeping only ``label``-named element atoms.

    Every other atom maps to ``()``; the result mirrors the structure of
    ``t`` and is not simplified.  Total on well-formed inputs.
    """
    if isinstance(t, Element):
        return t if t.label == label else EMPTY
    if isinstance(t, Atom):
        return EMPTY
    if isinstance(t, Empty):
        return EMPTY
    if isinstance(t, Or):
        return Or(filter_label(sig, t.left, label), filter_label(sig, t.right, label))
    if isinstance(t, Seq):
        return Seq(filter_label(sig, t.left, label), filter_label(sig, t.right, label))
    if isinstance(t, Star):
        return Star(filter_label(sig, t.inner, label))
    assert isinstance(t, Var)
    return filter_label(sig, sig.definition(t.name), label)


def synth_expr(decls: GlobalDecls, sig: Signature, env: TypeEnv,
               e: QueryExpr) -> Type:
    """Synthesize the unique algorithmic type of ``e``, or raise
    TypeCheckFailure with a diagnostic."""
    if isinstance(e, EmptySeq):
        return EMPTY
    if isinstance(e, StrLit):
        return STRING
    if isinstance(e, BoolLit):
        return BOOL
    if isinstance(e, VarRef):
        binding = env.get(e.name)
        if binding is None:
            _fail(f"unbound variable ${e.name}", "query/var-unbound", e.span)
        return binding.atom if isinstance(binding, TreeBinding) else binding.type
    if isinstance(e, Concat):
        return Seq(synth_expr(decls, sig, env, e.left),
                   synth_expr(decls, sig, env, e.right))
    if isinstance(e, Elem):
        return Element(e.label, synth_expr(decls, sig, env, e.content))
    if isinstance(e, Let):
        bound = synth_expr(decls, sig, env, e.bound)
        inner = {**env, e.var: ForestBinding(bound)}
        return synth_expr(decls, sig, inner, e.body)
    if isinstance(e, If):
        cond = synth_expr(decls, sig, env, e.cond)
        if not subtype(sig, cond, BOOL):
            _fail(f"condition has type {type_str(cond)}, not bool",
                  "query/if-condition", e.span)
        return Or(synth_expr(decls, sig, env, e.then),
                  synth_expr(decls, sig, env, e.els))
    if isinstance(e, Children):
        binding = env.get(e.var)
        if binding is None:
            _fail(f"unbound variable ${e.var}", "query/var-unbound", e.span)
        if not isinstance(binding, TreeBinding):
            _fail(f"${e.var} is a forest variable; child projection needs a "
                  f"for-bound tree variable", "query/child-source", e.span)
        atom = binding.atom
        if not isinstance(atom, Element):
            _fail(f"${e.var} has type {type_str(atom)}, which has no children",
                  "query/child-of-non-element", e.span)
        return atom.content
    if isinstance(e, LabelFilter):
        source = synth_expr(decls, sig, env, e.source)
        return filter_label(sig, source, e.label)
    if isinstance(e, For):
        source = synth_expr(decls, sig, env, e.source)
        return synth_for(decls, sig, env, e.var, source, e.body)
    assert isinstance(e, Call)
    fn = decls.functions.get(e.name)
    if fn is None:
        _fail(f"undeclared function {e.name}", "query/call-undeclared", e.span)
    if len(e.args) != len(fn.params):
        _fail(f"{e.name} expects {len(fn.params)} argument(s), got {len(e.args)}",
              "query/call-arity", e.span)
    for i, (arg, expected) in enumerate(zip(e.args, fn.params)):
        actual = synth_expr(decls, sig, env, arg)
        if not subtype(sig, actual, expected):
            _fail(f"argument {i + 1} of {e.name} has type {type_str(actual)}, "
                  f"expected a subtype of {type_str(expected)}",
                  "query/call-argument", arg.span or e.span)
    return fn.result


def synth_for(decls: GlobalDecls, sig: Signature, env: TypeEnv, var: str,
              source_type: Type, body: QueryExpr) -> Type:
    """Iteration typing: recurse structurally over the source type, typing
    the body once per atomic alternative with the tree variable bound to it."""
    if isinstance(source_type, Empty):
        return EMPTY
    if isinstance(source_type, Atom):
        inner = {**env, var: TreeBinding(source_type)}
        return synth_expr(decls, sig, inner, body)
    if isinstance(source_type, Or):
        return Or(synth_for(decls, sig, env, var, source_type.left, body),
                  synth_for(decls, sig, env, var, source_type.right, body))
    if isinstance(source_type, Seq):
        return Seq(synth_for(decls, sig, env, var, source_type.left, body),
                   synth_for(decls, sig, env, var, source_type.right, body))
    if isinstance(source_type, Star):
        return Star(synth_for(decls, sig, env, var, source_type.inner, body))
    assert isinstance(source_type, Var)
    return synth_for(decls, sig, env, var, sig.definition(source_type.name), body)


def check_expr(decls: GlobalDecls, sig: Signature, env: TypeEnv, e: QueryExpr,
               expected: Type) -> tuple[bool, Diagnostic | None]:
    """Synthesize then check against ``expected`` by one subtype test."""
    try:
        actual = synth_expr(decls, sig, env, e)
    except TypeCheckFailure as exc:
        return False, exc.diagnostic
    if subtype(sig, actual, expected):
        return True, None
    return False, error(
        f"expression has type {type_str(actual)}, which is not a subtype "
        f"of {type_str(expected)}", "query/ascription", e.span)


def collect_function_decls(functions: tuple[FunctionDecl, ...]) -> tuple[
        dict[str, FunctionSig], list[Diagnostic]]:
    """Preprocessing pass: gather function headers, diagnosing duplicates."""
    headers: dict[str, FunctionSig] = {}
    diags: list[Diagnostic] = []
    for fn in functions:
        if fn.name in headers:
            diags.append(error(f"function {fn.name} declared twice",
                               "program/duplicate-function", fn.span))
            continue
        headers[fn.name] = FunctionSig(tuple(t for _, t in fn.params), fn.result)
    return headers, diags


def _declared_type_diags(sig: Signature, types_with_spans) -> list[Diagnostic]:
    """Every annotation must mention only declared type variables."""
    out: list[Diagnostic] = []
    for t, span in types_with_spans:
        try:
            check_type_declared(sig, t)
        except UndeclaredVariable as exc:
            diag = error(str(exc), "signature/undeclared", span)
            if diag not in out:
                out.append(diag)
    return out


def check_query_program(sig: Signature, prog: QueryProgram,
                        env: TypeEnv | None = None) -> list[Diagnostic]:
    """Check all function bodies and the main query against its ascription.

    ``env`` provides types for free variables of the main query (empty by
    default).  Assumes ``sig`` is well-formed.
    """
    env = env or {}
    headers, diags = collect_function_decls(prog.functions)
    annotations = [(prog.ascription, prog.span)]
    for fn in prog.functions:
        annotations += [(t, fn.span) for _, t in fn.params]
        annotations.append((fn.result, fn.span))
    bad = _declared_type_diags(sig, annotations)
    if bad:
        return diags + bad
    decls = GlobalDecls(functions=headers)
    for fn in prog.functions:
        fn_env: dict[str, ForestBinding] = {
            name: ForestBinding(t) for name, t in fn.params}
        try:
            ok, diag = check_expr(decls, sig, fn_env, fn.body, fn.result)
        except UndeclaredVariable as exc:
            ok, diag = False, error(str(exc), "signature/undeclared", fn.span)
        if not ok:
            assert diag is not None
            diags.append(error(f"in function {fn.name}: {diag.message}",
                               diag.rule, diag.span or fn.span))
    try:
        ok, diag = check_expr(decls, sig, env, prog.main, prog.ascription)
    except UndeclaredVariable as exc:
        ok, diag = False, error(str(exc), "signature/undeclared", prog.span)
    if not ok:
        assert diag is not None
        diags.append(diag)
    return diags
