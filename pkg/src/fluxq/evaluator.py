"""Reference interpreter for queries and updates.

Evaluation is call-by-value and deterministic.  Variable environments map
names to forests; a tree variable holds a singleton forest.  Updates operate
on a focused part of the value: navigation changes the focus, tests check a
single tree's top-level kind, and iteration maps a singular update over a
forest, concatenating the results.

Focus-shape violations (rename on a non-singleton focus, insert on a
non-empty focus, and the like) are runtime errors rather than no-ops:
well-typed programs never trigger them, so any occurrence points at a
typechecker bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import EvalError, RecursionLimitExceeded
from .printer import value_str
from .queries import (
    BoolLit, Call, Children, Concat, Elem, EmptySeq, For, If, LabelFilter,
    Let, QueryExpr, QueryProgram, StrLit, VarRef,
)
from .subtyping import BoolTest, StringTest, TestKind, WildcardTest
from .types import (
    ForestBinding, FunctionSig, GlobalDecls, ProcedureSig, Signature,
    TreeBinding, TypeEnv,
)
from .updates import (
    Delete, Direction, IfStmt, Insert, LetStmt, Nav, ProcCall, Rename,
    SeqStmt, Skip, Snapshot, Test, UpdateProgram, UpdateStmt,
)
from .values import (
    BoolVal, EMPTY_FOREST, FALSE, Forest, Node, StrVal, TRUE, Tree, member,
)

ValueEnv = Mapping[str, Forest]

Builtin = Callable[..., Forest]

DEFAULT_RECURSION_LIMIT = 256


@dataclass(frozen=True)
class Runtime:
    """Declarations plus bodies, ready to execute."""

    decls: GlobalDecls = field(default_factory=GlobalDecls)
    function_bodies: Mapping[str, tuple[tuple[str, ...], QueryExpr]] = field(
        default_factory=dict)
    procedure_bodies: Mapping[str, tuple[tuple[str, ...], UpdateStmt]] = field(
        default_factory=dict)
    builtins: Mapping[str, Builtin] = field(default_factory=dict)
    recursion_limit: int = DEFAULT_RECURSION_LIMIT


def runtime_for_query_program(prog: QueryProgram, *,
                              builtins: Mapping[str, tuple[FunctionSig, Builtin]] | None = None,
                              recursion_limit: int = DEFAULT_RECURSION_LIMIT) -> Runtime:
    functions = {f.name: FunctionSig(tuple(t for _, t in f.params), f.result)
                 for f in prog.functions}
    bodies = {f.name: (tuple(n for n, _ in f.params), f.body)
              for f in prog.functions}
    native: dict[str, Builtin] = {}
    if builtins:
        for name, (sig_entry, fn) in builtins.items():
            functions[name] = sig_entry
            native[name] = fn
    return Runtime(GlobalDecls(functions=functions), bodies, {}, native,
                   recursion_limit)


def runtime_for_update_program(prog: UpdateProgram, *,
                               recursion_limit: int = DEFAULT_RECURSION_LIMIT) -> Runtime:
    functions = {f.name: FunctionSig(tuple(t for _, t in f.params), f.result)
                 for f in prog.functions}
    fn_bodies = {f.name: (tuple(n for n, _ in f.params), f.body)
                 for f in prog.functions}
    procedures = {p.name: ProcedureSig(tuple(t for _, t in p.params),
                                       p.input, p.output)
                  for p in prog.procedures}
    proc_bodies = {p.name: (tuple(n for n, _ in p.params), p.body)
                   for p in prog.procedures}
    return Runtime(GlobalDecls(functions=functions, procedures=procedures),
                   fn_bodies, proc_bodies, {}, recursion_limit)


def _children_of(tree: Tree) -> Forest:
    return tree.children if isinstance(tree, Node) else EMPTY_FOREST


def _tree_passes(tree: Tree, test: TestKind) -> bool:
    if isinstance(test, BoolTest):
        return isinstance(tree, BoolVal)
    if isinstance(test, StringTest):
        return isinstance(tree, StrVal)
    if isinstance(test, WildcardTest):
        return isinstance(tree, Node)
    return isinstance(tree, Node) and tree.label == test.label


def eval_query(rt: Runtime, env: ValueEnv, e: QueryExpr,
               _depth: int = 0) -> Forest:
    """Evaluate ``e`` to a forest under ``env``."""
    if isinstance(e, EmptySeq):
        return EMPTY_FOREST
    if isinstance(e, StrLit):
        return (StrVal(e.value),)
    if isinstance(e, BoolLit):
        return (TRUE if e.value else FALSE,)
    if isinstance(e, VarRef):
        if e.name not in env:
            raise EvalError(f"unbound variable ${e.name}")
        return env[e.name]
    if isinstance(e, Concat):
        return (eval_query(rt, env, e.left, _depth)
                + eval_query(rt, env, e.right, _depth))
    if isinstance(e, Elem):
        return (Node(e.label, eval_query(rt, env, e.content, _depth)),)
    if isinstance(e, Let):
        bound = eval_query(rt, env, e.bound, _depth)
        return eval_query(rt, {**env, e.var: bound}, e.body, _depth)
    if isinstance(e, If):
        cond = eval_query(rt, env, e.cond, _depth)
        if len(cond) != 1 or not isinstance(cond[0], BoolVal):
            raise EvalError(
                f"condition evaluated to {value_str(cond)}, not a boolean")
        branch = e.then if cond[0].value else e.els
        return eval_query(rt, env, branch, _depth)
    if isinstance(e, Children):
        if e.var not in env:
            raise EvalError(f"unbound variable ${e.var}")
        v = env[e.var]
        if len(v) != 1:
            raise EvalError(f"${e.var} holds a forest of length {len(v)}, "
                            f"not a single tree")
        return _children_of(v[0])
    if isinstance(e, LabelFilter):
        source = eval_query(rt, env, e.source, _depth)
        return tuple(t for t in source
                     if isinstance(t, Node) and t.label == e.label)
    if isinstance(e, For):
        source = eval_query(rt, env, e.source, _depth)
        out: list[Tree] = []
        for tree in source:
            out.extend(eval_query(rt, {**env, e.var: (tree,)}, e.body, _depth))
        return tuple(out)
    assert isinstance(e, Call)
    args = [eval_query(rt, env, a, _depth) for a in e.args]
    native = rt.builtins.get(e.name)
    if native is not None:
        return native(*args)
    entry = rt.function_bodies.get(e.name)
    if entry is None:
        raise EvalError(f"undeclared function {e.name}")
    if _depth + 1 > rt.recursion_limit:
        raise RecursionLimitExceeded(
            f"recursion limit {rt.recursion_limit} exceeded calling {e.name}")
    params, body = entry
    if len(params) != len(args):
        raise EvalError(f"{e.name} expects {len(params)} argument(s), "
                        f"got {len(args)}")
    return eval_query(rt, dict(zip(params, args)), body, _depth + 1)


def apply_update(rt: Runtime, env: ValueEnv, v: Forest, s: UpdateStmt,
                 _depth: int = 0) -> Forest:
    """Apply ``s`` to the focused value ``v`` and return the updated value."""
    if isinstance(s, Skip):
        return v
    if isinstance(s, SeqStmt):
        mid = apply_update(rt, env, v, s.first, _depth)
        return apply_update(rt, env, mid, s.second, _depth)
    if isinstance(s, IfStmt):
        cond = eval_query(rt, env, s.cond, _depth)
        if len(cond) != 1 or not isinstance(cond[0], BoolVal):
            raise EvalError(
                f"condition evaluated to {value_str(cond)}, not a boolean")
        branch = s.then if cond[0].value else s.els
        return apply_update(rt, env, v, branch, _depth)
    if isinstance(s, LetStmt):
        bound = eval_query(rt, env, s.bound, _depth)
        return apply_update(rt, {**env, s.var: bound}, v, s.body, _depth)
    if isinstance(s, Snapshot):
        return apply_update(rt, {**env, s.var: v}, v, s.body, _depth)
    if isinstance(s, Insert):
        if v != EMPTY_FOREST:
            raise EvalError(f"insert applied to non-empty focus {value_str(v)}")
        return eval_query(rt, env, s.expr, _depth)
    if isinstance(s, Delete):
        return EMPTY_FOREST
    if isinstance(s, Rename):
        if len(v) != 1 or not isinstance(v[0], Node):
            raise EvalError(f"rename applied to {value_str(v)}, not a single "
                            f"element")
        return (Node(s.label, v[0].children),)
    if isinstance(s, Test):
        if len(v) != 1:
            raise EvalError(f"test applied to a forest of length {len(v)}")
        if _tree_passes(v[0], s.test):
            return apply_update(rt, env, v, s.body, _depth)
        return v
    if isinstance(s, Nav):
        if s.direction is Direction.LEFT:
            grown = apply_update(rt, env, EMPTY_FOREST, s.body, _depth)
            return grown + v
        if s.direction is Direction.RIGHT:
            grown = apply_update(rt, env, EMPTY_FOREST, s.body, _depth)
            return v + grown
        if s.direction is Direction.CHILDREN:
            if len(v) != 1 or not isinstance(v[0], Node):
                raise EvalError(f"children[...] applied to {value_str(v)}, "
                                f"not a single element")
            node = v[0]
            return (Node(node.label,
                         apply_update(rt, env, node.children, s.body, _depth)),)
        assert s.direction is Direction.ITER
        out: list[Tree] = []
        for tree in v:
            out.extend(apply_update(rt, env, (tree,), s.body, _depth))
        return tuple(out)
    assert isinstance(s, ProcCall)
    args = [eval_query(rt, env, a, _depth) for a in s.args]
    entry = rt.procedure_bodies.get(s.name)
    if entry is None:
        raise EvalError(f"undeclared procedure {s.name}")
    if _depth + 1 > rt.recursion_limit:
        raise RecursionLimitExceeded(
            f"recursion limit {rt.recursion_limit} exceeded calling {s.name}")
    params, body = entry
    if len(params) != len(args):
        raise EvalError(f"{s.name} expects {len(params)} argument(s), "
                        f"got {len(args)}")
    return apply_update(rt, dict(zip(params, args)), v, body, _depth + 1)


def conforms(sig: Signature, env: ValueEnv, type_env: TypeEnv) -> bool:
    """Do the bindings of ``env`` inhabit the types declared in ``type_env``?

    Tree bindings must hold exactly one tree belonging to their atom."""
    if env.keys() != type_env.keys():
        return False
    for name, binding in type_env.items():
        value = env[name]
        if isinstance(binding, TreeBinding):
            if len(value) != 1 or not member(sig, value, binding.atom):
                return False
        else:
            assert isinstance(binding, ForestBinding)
            if not member(sig, value, binding.type):
                return False
    return True
