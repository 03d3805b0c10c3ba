"""Command-line interface.

Subcommands: ``check`` (typecheck a program file), ``type`` (print the
synthesized type of the main query or update), ``subtype`` (decide inclusion
of two types), ``eval`` (run a query program), ``run-update`` (apply an
update program to a value), and ``oracle`` (run the bounded property
suites).  Exit codes: 0 success, 1 check/suite failure, 2 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .diagnostics import CheckReport, Diagnostic
from .errors import EvalError, FluxqError, ParseError, TypeCheckFailure, UndeclaredVariable
from .evaluator import (
    runtime_for_query_program, runtime_for_update_program, eval_query,
    apply_update,
)
from .generators import GenConfig
from .parser import (
    parse_env_bindings, parse_program, parse_signature, parse_type,
    parse_value,
)
from .printer import type_str, value_str
from .queries import QueryProgram, check_query_program, collect_function_decls, synth_expr
from .subtyping import subtype
from .suites import run_suites
from .types import (
    EMPTY_SIGNATURE, GlobalDecls, ProcedureSig, Signature, check_signature,
)
from .updates import Multiplicity, UpdateProgram, check_update_program, synth_stmt


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _labels_in(sig: Signature, prog) -> tuple[str, ...]:
    from .types import Element, Or, Seq, Star
    labels: set[str] = set()

    def walk_type(t):
        if isinstance(t, Element):
            labels.add(t.label)
            walk_type(t.content)
        elif isinstance(t, (Or, Seq)):
            walk_type(t.left)
            walk_type(t.right)
        elif isinstance(t, Star):
            walk_type(t.inner)

    for _, body in sig.items():
        walk_type(body)
    if isinstance(prog, QueryProgram):
        walk_type(prog.ascription)
    elif isinstance(prog, UpdateProgram):
        walk_type(prog.input)
        walk_type(prog.output)
    return tuple(sorted(labels)) or ("a", "b")


def _report(program_type: str | None, diagnostics: list[Diagnostic],
            as_json: bool) -> int:
    ok = not any(d.severity == "error" for d in diagnostics)
    if as_json:
        report = CheckReport("ok" if ok else "error",
                             program_type if ok else None,
                             tuple(diagnostics))
        print(json.dumps(report.to_json(), indent=2))
    else:
        for d in diagnostics:
            print(d.render(), file=sys.stderr)
        if ok and program_type is not None:
            print(program_type)
        elif ok:
            print("ok")
    return 0 if ok else 1


def _parse_type_env(args) -> dict:
    """``--var x=TYPE`` forest bindings and ``--tree x=TYPE`` tree bindings."""
    from .types import Atom, ForestBinding, TreeBinding
    env: dict = {}
    for spec in args.var or []:
        name, _, text = spec.partition("=")
        env[name.strip().lstrip("$")] = ForestBinding(parse_type(text))
    for spec in getattr(args, "tree", None) or []:
        name, _, text = spec.partition("=")
        atom = parse_type(text)
        if not isinstance(atom, Atom):
            raise ParseError(f"--tree binding for {name} must be an atomic "
                             f"type, got {type_str(atom)}", 0, 1, 1)
        env[name.strip().lstrip("$")] = TreeBinding(atom)
    return env


def _load_checked(path: str, env: dict) -> tuple[object, Signature, list[Diagnostic]]:
    prog, sig = parse_program(_read(path), path)
    diags = list(check_signature(sig))
    if not diags:
        if isinstance(prog, QueryProgram):
            diags += check_query_program(sig, prog, env)
        else:
            diags += check_update_program(sig, prog, env)
    return prog, sig, diags


def _synthesize_main(prog, sig: Signature, env: dict) -> str:
    if isinstance(prog, QueryProgram):
        headers, _ = collect_function_decls(prog.functions)
        decls = GlobalDecls(functions=headers)
        return type_str(synth_expr(decls, sig, env, prog.main))
    headers, _ = collect_function_decls(prog.functions)
    procs = {p.name: ProcedureSig(tuple(t for _, t in p.params),
                                  p.input, p.output)
             for p in prog.procedures}
    decls = GlobalDecls(functions=headers, procedures=procs)
    out = synth_stmt(decls, sig, env, Multiplicity.PLURAL, prog.input,
                     prog.main)
    return type_str(out)


def cmd_check(args) -> int:
    env = _parse_type_env(args)
    prog, sig, diags = _load_checked(args.file, env)
    synthesized = None
    if not diags:
        try:
            synthesized = _synthesize_main(prog, sig, env)
        except (TypeCheckFailure, UndeclaredVariable):
            synthesized = None
    return _report(synthesized, diags, args.json)


def cmd_type(args) -> int:
    env = _parse_type_env(args)
    prog, sig = parse_program(_read(args.file), args.file)
    diags = list(check_signature(sig))
    if diags:
        return _report(None, diags, args.json)
    try:
        synthesized = _synthesize_main(prog, sig, env)
    except TypeCheckFailure as exc:
        return _report(None, [exc.diagnostic], args.json)
    return _report(synthesized, [], args.json)


def cmd_subtype(args) -> int:
    sig = parse_signature(_read(args.sig), args.sig) if args.sig else EMPTY_SIGNATURE
    bad = check_signature(sig)
    if bad:
        return _report(None, bad, args.json)
    t1 = parse_type(args.left)
    t2 = parse_type(args.right)
    result = subtype(sig, t1, t2)
    if args.json:
        print(json.dumps({"left": type_str(t1), "right": type_str(t2),
                          "subtype": result}))
    else:
        print("subtype" if result else "not a subtype")
    return 0 if result else 1


def cmd_eval(args) -> int:
    prog, sig = parse_program(_read(args.file), args.file)
    if not isinstance(prog, QueryProgram):
        print("eval expects a query program", file=sys.stderr)
        return 2
    env = parse_env_bindings(args.env or [])
    rt = runtime_for_query_program(prog, recursion_limit=args.recursion_limit)
    result = eval_query(rt, env, prog.main)
    if args.json:
        print(json.dumps({"value": value_str(result)}))
    else:
        print(value_str(result))
    return 0


def cmd_run_update(args) -> int:
    prog, sig = parse_program(_read(args.file), args.file)
    if not isinstance(prog, UpdateProgram):
        print("run-update expects an update program", file=sys.stderr)
        return 2
    value = parse_value(args.input)
    env = parse_env_bindings(args.env or [])
    rt = runtime_for_update_program(prog, recursion_limit=args.recursion_limit)
    result = apply_update(rt, env, value, prog.main)
    if args.json:
        print(json.dumps({"value": value_str(result)}))
    else:
        print(value_str(result))
    return 0


def cmd_oracle(args) -> int:
    if args.file:
        prog, sig = parse_program(_read(args.file), args.file)
        bad = check_signature(sig)
        if bad:
            return _report(None, bad, args.json)
        labels = _labels_in(sig, prog)
        use_sig = sig if len(sig) else None
    else:
        labels = ("a", "b", "c")
        use_sig = None
    cfg = GenConfig(labels=labels, depth=args.max_depth, width=args.max_width,
                    seed=args.seed, cases=args.cases)
    report = run_suites(cfg, use_sig)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.summary())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="fluxq",
        description="Typecheck, evaluate, and property-test programs over "
                    "regular-expression types for XML forests.")
    top.add_argument("--json", action="store_true",
                     help="machine-readable output")
    top.add_argument("--max-depth", type=int, default=3, metavar="N",
                     help="value enumeration depth bound (default 3)")
    top.add_argument("--max-width", type=int, default=3, metavar="N",
                     help="forest length bound for enumeration (default 3)")
    top.add_argument("--recursion-limit", type=int, default=256, metavar="N",
                     help="call depth limit for evaluation (default 256)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="typecheck a program file")
    p.add_argument("file")
    p.add_argument("--var", action="append", metavar="NAME=TYPE",
                   help="ambient forest-variable binding for the main query")
    p.add_argument("--tree", action="append", metavar="NAME=TYPE",
                   help="ambient tree-variable binding (atomic type)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("type", help="print the synthesized type of the main "
                                    "query or update")
    p.add_argument("file")
    p.add_argument("--var", action="append", metavar="NAME=TYPE")
    p.add_argument("--tree", action="append", metavar="NAME=TYPE")
    p.set_defaults(func=cmd_type)

    p = sub.add_parser("subtype", help="decide t1 <: t2")
    p.add_argument("left", metavar="T1")
    p.add_argument("right", metavar="T2")
    p.add_argument("--sig", metavar="FILE",
                   help="file of `type X = t` declarations")
    p.set_defaults(func=cmd_subtype)

    p = sub.add_parser("eval", help="evaluate a query program")
    p.add_argument("file")
    p.add_argument("--env", action="append", metavar="BINDINGS",
                   help="variable bindings, e.g. 'x=a[],b[]; y=true'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run-update", help="apply an update program to a value")
    p.add_argument("file")
    p.add_argument("--input", required=True, metavar="VALUE")
    p.add_argument("--env", action="append", metavar="BINDINGS")
    p.set_defaults(func=cmd_run_update)

    p = sub.add_parser("oracle", help="run the bounded property suites")
    p.add_argument("file", nargs="?",
                   help="optional program file supplying the signature and "
                        "label universe")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=100, metavar="N",
                   help="cases per random suite (default 100)")
    p.set_defaults(func=cmd_oracle)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EvalError, UndeclaredVariable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FluxqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
