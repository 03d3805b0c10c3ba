"""Concrete syntax: lexer and recursive-descent parsers.

Types:        ``()  bool  string  n[t]  n[]  t,t  t|t  t*  t+  t?  X``
              (postfix quantifiers bind tightest, then ``,``, then ``|``;
              uppercase-initial identifiers are type variables).
Values:       ``true  false  "text"  n[...]  ()``, comma-separated forests.
Queries:      ``()  e,e  n[e]  "w"  true  false  $x  let $x = e in e
              if e then e else e  $x/child  e::n  $x/n  e/*
              for $y in e return e  f(e,...)``.
Statements:   ``skip  s;s  if e then s else s  let $x = e in s  insert e
              delete  rename n  snapshot $x in s  n?s  *?s  bool?s
              string?s  left[s]  right[s]  children[s]  iter[s]  p(e,...)``;
              ``?`` binds tighter than ``;``; ``(s)`` groups.
Programs:     ``type X = t`` entries, ``declare function f($x:t,...) : t
              { e };`` and ``declare procedure p($x:t,...) : t => t { s };``
              declarations, ended by ``query e : t`` or
              ``update s : t1 => t2``.

The derived type forms normalize while parsing (``t+`` to ``t,t*``, ``t?``
to ``t|()``, ``n[]`` to ``n[()]``), ``e/n`` and ``e/*`` elaborate to their
for-loop cores, and bound variables are renamed apart from the ambient
environment, so checker environments never see duplicate names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import SourceSpan
from .errors import ParseError
from .queries import (
    BoolLit, Call, Children, Concat, Elem, EmptySeq, For, FunctionDecl, If,
    LabelFilter, Let, QueryExpr, QueryProgram, StrLit, VarRef,
)
from .subtyping import (
    BoolTest, LabelTest, StringTest, TestKind, WildcardTest,
)
from .types import (
    BoolAtom, Element, Empty, EMPTY, Or, Seq, Signature, Star, StringAtom,
    Type, Var, optional, plus,
)
from .updates import (
    Delete, Direction, IfStmt, Insert, LetStmt, Nav, ProcCall, ProcedureDecl,
    Rename, SeqStmt, Skip, Snapshot, Test, UpdateProgram, UpdateStmt,
)
from .values import BoolVal, Forest, Node, StrVal, Tree

KEYWORDS = frozenset({
    "type", "query", "update", "declare", "function", "procedure",
    "let", "in", "if", "then", "else", "for", "return", "true", "false",
    "skip", "insert", "delete", "rename", "snapshot", "child", "children",
    "left", "right", "iter", "bool", "string",
})

_PUNCT = ("::", "=>", "(", ")", "[", "]", "{", "}", ",", "|", "*", "+",
          "?", "=", ";", ":", "/", "$")

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, TYPEVAR, VAR, STRING, punctuation text, KEYWORD text, EOF
    text: str
    offset: int
    end: int
    line: int
    col: int


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1

    def advance(n: int) -> None:
        nonlocal i, line, col
        for _ in range(n):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < len(text):
        c = text[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if c == "#":  # comment to end of line
            while i < len(text) and text[i] != "\n":
                advance(1)
            continue
        start, start_line, start_col = i, line, col
        if c == '"':
            advance(1)
            chars: list[str] = []
            while True:
                if i >= len(text) or text[i] == "\n":
                    raise ParseError("unterminated string literal",
                                     start, start_line, start_col)
                if text[i] == '"':
                    advance(1)
                    break
                if text[i] == "\\":
                    advance(1)
                    if i >= len(text) or text[i] not in _ESCAPES:
                        raise ParseError("bad string escape", i, line, col)
                    chars.append(_ESCAPES[text[i]])
                    advance(1)
                else:
                    chars.append(text[i])
                    advance(1)
            tokens.append(Token("STRING", "".join(chars), start, i,
                                start_line, start_col))
            continue
        if c == "$":
            advance(1)
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i or not text[i].isalpha():
                raise ParseError("expected variable name after $",
                                 start, start_line, start_col)
            name = text[i:j]
            advance(j - i)
            tokens.append(Token("VAR", name, start, i, start_line, start_col))
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            advance(j - i)
            if word in KEYWORDS:
                kind = word
            elif word[0].isupper():
                kind = "TYPEVAR"
            else:
                kind = "IDENT"
            tokens.append(Token(kind, word, start, i, start_line, start_col))
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                advance(len(punct))
                tokens.append(Token(punct, punct, start, i,
                                    start_line, start_col))
                break
        else:
            raise ParseError(f"unexpected character {c!r}", i, line, col)
    tokens.append(Token("EOF", "", len(text), len(text), line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, filename: str = "<input>"):
        self.filename = filename
        self.tokens = tokenize(text, filename)
        self.pos = 0
        self._sugar_count = 0

    # -- token plumbing ------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"unexpected {self._describe(tok)}",
                      expected=(what or kind,))
        return self.next()

    def fail(self, message: str, expected: tuple[str, ...] = ()):
        tok = self.peek()
        raise ParseError(message, tok.offset, tok.line, tok.col, expected)

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "EOF" else f"{tok.text!r}"

    def span_from(self, start: Token) -> SourceSpan:
        prev = self.tokens[max(self.pos - 1, 0)]
        end = prev if prev.end >= start.offset else start
        return SourceSpan(self.filename, start.offset, end.end,
                          start.line, start.col, end.line, end.col)

    def _fresh_var(self) -> str:
        self._sugar_count += 1
        return f"y{self._sugar_count}"

    # -- types -----------------------------------------------------------

    def parse_type(self) -> Type:
        start = self.peek()
        left = self.parse_type_seq()
        if self.accept("|"):
            right = self.parse_type()
            return Or(left, right, span=self.span_from(start))
        return left

    def parse_type_seq(self) -> Type:
        start = self.peek()
        left = self.parse_type_postfix()
        if self.accept(","):
            right = self.parse_type_seq()
            return Seq(left, right, span=self.span_from(start))
        return left

    def parse_type_postfix(self) -> Type:
        start = self.peek()
        t = self.parse_type_primary()
        while self.at("*", "+", "?"):
            op = self.next()
            if op.kind == "*":
                t = Star(t, span=self.span_from(start))
            elif op.kind == "+":
                t = plus(t)
            else:
                t = optional(t)
        return t

    def parse_type_primary(self) -> Type:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            if self.accept(")"):
                return Empty(span=self.span_from(tok))
            t = self.parse_type()
            self.expect(")")
            return t
        if tok.kind == "bool":
            self.next()
            return BoolAtom(span=self.span_from(tok))
        if tok.kind == "string":
            self.next()
            return StringAtom(span=self.span_from(tok))
        if tok.kind == "TYPEVAR":
            self.next()
            return Var(tok.text, span=self.span_from(tok))
        if tok.kind == "IDENT":
            self.next()
            self.expect("[")
            if self.accept("]"):
                content: Type = EMPTY
            else:
                content = self.parse_type()
                self.expect("]")
            return Element(tok.text, content, span=self.span_from(tok))
        self.fail(f"unexpected {self._describe(tok)} in type",
                  expected=("a type",))

    # -- values ----------------------------------------------------------

    def parse_forest(self) -> Forest:
        if self.at("(") and self.peek(1).kind == ")":
            self.next()
            self.next()
            trees: list[Tree] = []
        else:
            trees = [self.parse_tree()]
        while self.accept(","):
            if self.at("(") and self.peek(1).kind == ")":
                self.next()
                self.next()
                continue
            trees.append(self.parse_tree())
        return tuple(trees)

    def parse_tree(self) -> Tree:
        tok = self.peek()
        if tok.kind == "true":
            self.next()
            return BoolVal(True)
        if tok.kind == "false":
            self.next()
            return BoolVal(False)
        if tok.kind == "STRING":
            self.next()
            return StrVal(tok.text)
        if tok.kind == "IDENT":
            self.next()
            self.expect("[")
            if self.accept("]"):
                return Node(tok.text, ())
            children = self.parse_forest()
            self.expect("]")
            return Node(tok.text, children)
        self.fail(f"unexpected {self._describe(tok)} in value",
                  expected=("a value",))

    # -- query expressions -------------------------------------------------

    def parse_expr(self) -> QueryExpr:
        start = self.peek()
        left = self.parse_expr_single()
        if self.accept(","):
            right = self.parse_expr()
            return Concat(left, right, span=self.span_from(start))
        return left

    def parse_expr_single(self) -> QueryExpr:
        tok = self.peek()
        if tok.kind == "let":
            self.next()
            var = self.expect("VAR", "a variable").text
            self.expect("=")
            bound = self.parse_expr_single()
            self.expect("in")
            body = self.parse_expr_single()
            return Let(var, bound, body, span=self.span_from(tok))
        if tok.kind == "for":
            self.next()
            var = self.expect("VAR", "a variable").text
            self.expect("in")
            source = self.parse_expr_single()
            self.expect("return")
            body = self.parse_expr_single()
            return For(var, source, body, span=self.span_from(tok))
        if tok.kind == "if":
            self.next()
            cond = self.parse_expr_single()
            self.expect("then")
            then = self.parse_expr_single()
            self.expect("else")
            els = self.parse_expr_single()
            return If(cond, then, els, span=self.span_from(tok))
        return self.parse_expr_path()

    def parse_expr_path(self) -> QueryExpr:
        start = self.peek()
        e = self.parse_expr_primary()
        while True:
            if self.at("::"):
                self.next()
                label = self.expect("IDENT", "a label").text
                e = LabelFilter(e, label, span=self.span_from(start))
            elif self.at("/"):
                self.next()
                if self.accept("child"):
                    if not isinstance(e, VarRef):
                        self.fail("child projection applies to a variable")
                    e = Children(e.name, span=self.span_from(start))
                elif self.at("*"):
                    self.next()
                    fresh = self._fresh_var()
                    span = self.span_from(start)
                    e = For(fresh, e, Children(fresh, span=span), span=span)
                else:
                    label = self.expect("IDENT", "a label").text
                    fresh = self._fresh_var()
                    span = self.span_from(start)
                    e = For(fresh, e,
                            LabelFilter(Children(fresh, span=span), label,
                                        span=span), span=span)
            else:
                return e

    def parse_expr_primary(self) -> QueryExpr:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            if self.accept(")"):
                return EmptySeq(span=self.span_from(tok))
            e = self.parse_expr()
            self.expect(")")
            return e
        if tok.kind == "true":
            self.next()
            return BoolLit(True, span=self.span_from(tok))
        if tok.kind == "false":
            self.next()
            return BoolLit(False, span=self.span_from(tok))
        if tok.kind == "STRING":
            self.next()
            return StrLit(tok.text, span=self.span_from(tok))
        if tok.kind == "VAR":
            self.next()
            return VarRef(tok.text, span=self.span_from(tok))
        if tok.kind == "IDENT":
            self.next()
            if self.accept("["):
                if self.accept("]"):
                    content: QueryExpr = EmptySeq()
                else:
                    content = self.parse_expr()
                    self.expect("]")
                return Elem(tok.text, content, span=self.span_from(tok))
            self.expect("(", "( to begin arguments")
            args: list[QueryExpr] = []
            if not self.at(")"):
                args.append(self.parse_expr_single())
                while self.accept(","):
                    args.append(self.parse_expr_single())
            self.expect(")")
            return Call(tok.text, tuple(args), span=self.span_from(tok))
        self.fail(f"unexpected {self._describe(tok)} in expression",
                  expected=("an expression",))

    # -- update statements -------------------------------------------------

    def parse_stmt(self) -> UpdateStmt:
        start = self.peek()
        first = self.parse_stmt_item()
        if self.accept(";"):
            second = self.parse_stmt()
            return SeqStmt(first, second, span=self.span_from(start))
        return first

    def parse_stmt_item(self) -> UpdateStmt:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            s = self.parse_stmt()
            self.expect(")")
            return s
        if tok.kind == "skip":
            self.next()
            return Skip(span=self.span_from(tok))
        if tok.kind == "delete":
            self.next()
            return Delete(span=self.span_from(tok))
        if tok.kind == "insert":
            self.next()
            expr = self.parse_expr_single()
            return Insert(expr, span=self.span_from(tok))
        if tok.kind == "rename":
            self.next()
            label = self.expect("IDENT", "a label").text
            return Rename(label, span=self.span_from(tok))
        if tok.kind == "if":
            self.next()
            cond = self.parse_expr_single()
            self.expect("then")
            then = self.parse_stmt_item()
            self.expect("else")
            els = self.parse_stmt_item()
            return IfStmt(cond, then, els, span=self.span_from(tok))
        if tok.kind == "let":
            self.next()
            var = self.expect("VAR", "a variable").text
            self.expect("=")
            bound = self.parse_expr_single()
            self.expect("in")
            body = self.parse_stmt_item()
            return LetStmt(var, bound, body, span=self.span_from(tok))
        if tok.kind == "snapshot":
            self.next()
            var = self.expect("VAR", "a variable").text
            self.expect("in")
            body = self.parse_stmt_item()
            return Snapshot(var, body, span=self.span_from(tok))
        if tok.kind in ("left", "right", "children", "iter"):
            self.next()
            self.expect("[")
            body = self.parse_stmt()
            self.expect("]")
            return Nav(Direction(tok.kind), body, span=self.span_from(tok))
        if tok.kind in ("bool", "string", "*") or (
                tok.kind == "IDENT" and self.peek(1).kind == "?"):
            return self.parse_test()
        if tok.kind == "IDENT":
            self.next()
            self.expect("(", "( to begin arguments")
            args: list[QueryExpr] = []
            if not self.at(")"):
                args.append(self.parse_expr_single())
                while self.accept(","):
                    args.append(self.parse_expr_single())
            self.expect(")")
            return ProcCall(tok.text, tuple(args), span=self.span_from(tok))
        self.fail(f"unexpected {self._describe(tok)} in update statement",
                  expected=("an update statement",))

    def parse_test(self) -> UpdateStmt:
        tok = self.next()
        test: TestKind
        if tok.kind == "bool":
            test = BoolTest()
        elif tok.kind == "string":
            test = StringTest()
        elif tok.kind == "*":
            test = WildcardTest()
        else:
            test = LabelTest(tok.text)
        self.expect("?")
        body = self.parse_stmt_item()
        return Test(test, body, span=self.span_from(tok))

    # -- programs ----------------------------------------------------------

    def parse_params(self) -> tuple[tuple[str, Type], ...]:
        self.expect("(")
        params: list[tuple[str, Type]] = []
        if not self.at(")"):
            while True:
                name = self.expect("VAR", "a parameter").text
                self.expect(":")
                t = self.parse_type()
                if any(name == seen for seen, _ in params):
                    self.fail(f"duplicate parameter ${name}")
                params.append((name, t))
                if not self.accept(","):
                    break
        self.expect(")")
        return tuple(params)

    def parse_program(self) -> tuple[QueryProgram | UpdateProgram, Signature]:
        sig_entries: list[tuple[str, Type]] = []
        functions: list[FunctionDecl] = []
        procedures: list[ProcedureDecl] = []
        while True:
            tok = self.peek()
            if tok.kind == "type":
                self.next()
                name = self.expect("TYPEVAR", "a type variable").text
                self.expect("=")
                body = self.parse_type()
                sig_entries.append((name, body))
            elif tok.kind == "declare":
                self.next()
                if self.accept("function"):
                    name = self.expect("IDENT", "a function name").text
                    params = self.parse_params()
                    self.expect(":")
                    result = self.parse_type()
                    self.expect("{")
                    body = self.parse_expr()
                    self.expect("}")
                    self.expect(";")
                    body = rename_bound_expr(
                        body, set(n for n, _ in params) | free_names_expr(body))
                    functions.append(FunctionDecl(
                        name, params, result, body, span=self.span_from(tok)))
                elif self.accept("procedure"):
                    name = self.expect("IDENT", "a procedure name").text
                    params = self.parse_params()
                    self.expect(":")
                    input_t = self.parse_type()
                    self.expect("=>")
                    output_t = self.parse_type()
                    self.expect("{")
                    body = self.parse_stmt()
                    self.expect("}")
                    self.expect(";")
                    body = rename_bound_stmt(
                        body, set(n for n, _ in params) | free_names_stmt(body))
                    procedures.append(ProcedureDecl(
                        name, params, input_t, output_t, body,
                        span=self.span_from(tok)))
                else:
                    self.fail("expected 'function' or 'procedure'",
                              expected=("function", "procedure"))
            elif tok.kind == "query":
                self.next()
                main = self.parse_expr()
                self.expect(":")
                ascription = self.parse_type()
                self.expect("EOF", "end of program")
                if procedures:
                    raise ParseError(
                        "query programs cannot declare procedures",
                        tok.offset, tok.line, tok.col)
                main = rename_bound_expr(main, free_names_expr(main))
                return (QueryProgram(tuple(functions), main, ascription,
                                     span=self.span_from(tok)),
                        Signature(sig_entries))
            elif tok.kind == "update":
                self.next()
                main = self.parse_stmt()
                self.expect(":")
                input_t = self.parse_type()
                self.expect("=>")
                output_t = self.parse_type()
                self.expect("EOF", "end of program")
                main = rename_bound_stmt(main, free_names_stmt(main))
                return (UpdateProgram(tuple(functions), tuple(procedures),
                                      main, input_t, output_t,
                                      span=self.span_from(tok)),
                        Signature(sig_entries))
            else:
                self.fail(f"unexpected {self._describe(tok)} at top level",
                          expected=("type", "declare", "query", "update"))

    def parse_signature(self) -> Signature:
        entries: list[tuple[str, Type]] = []
        while not self.at("EOF"):
            self.expect("type")
            name = self.expect("TYPEVAR", "a type variable").text
            self.expect("=")
            entries.append((name, self.parse_type()))
        return Signature(entries)


# -- binder renaming ---------------------------------------------------


def free_names_expr(e: QueryExpr, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(e, VarRef):
        return set() if e.name in bound else {e.name}
    if isinstance(e, Children):
        return set() if e.var in bound else {e.var}
    if isinstance(e, Concat):
        return free_names_expr(e.left, bound) | free_names_expr(e.right, bound)
    if isinstance(e, Elem):
        return free_names_expr(e.content, bound)
    if isinstance(e, Let):
        return (free_names_expr(e.bound, bound)
                | free_names_expr(e.body, bound | {e.var}))
    if isinstance(e, For):
        return (free_names_expr(e.source, bound)
                | free_names_expr(e.body, bound | {e.var}))
    if isinstance(e, If):
        return (free_names_expr(e.cond, bound) | free_names_expr(e.then, bound)
                | free_names_expr(e.els, bound))
    if isinstance(e, LabelFilter):
        return free_names_expr(e.source, bound)
    if isinstance(e, Call):
        out: set[str] = set()
        for a in e.args:
            out |= free_names_expr(a, bound)
        return out
    return set()


def free_names_stmt(s: UpdateStmt, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(s, SeqStmt):
        return free_names_stmt(s.first, bound) | free_names_stmt(s.second, bound)
    if isinstance(s, IfStmt):
        return (free_names_expr(s.cond, bound) | free_names_stmt(s.then, bound)
                | free_names_stmt(s.els, bound))
    if isinstance(s, LetStmt):
        return (free_names_expr(s.bound, bound)
                | free_names_stmt(s.body, bound | {s.var}))
    if isinstance(s, Snapshot):
        return free_names_stmt(s.body, bound | {s.var})
    if isinstance(s, Insert):
        return free_names_expr(s.expr, bound)
    if isinstance(s, (Test, Nav)):
        return free_names_stmt(s.body, bound)
    if isinstance(s, ProcCall):
        out: set[str] = set()
        for a in s.args:
            out |= free_names_expr(a, bound)
        return out
    return set()


def _pick_fresh(name: str, used: set[str]) -> str:
    if name not in used:
        return name
    n = 2
    while f"{name}_{n}" in used:
        n += 1
    return f"{name}_{n}"


def rename_bound_expr(e: QueryExpr, used: set[str],
                      mapping: dict[str, str] | None = None) -> QueryExpr:
    """Rename binders so no bound name collides with ``used`` or an
    enclosing binder; references follow their binder."""
    mapping = mapping or {}
    if isinstance(e, VarRef):
        name = mapping.get(e.name, e.name)
        return e if name == e.name else VarRef(name, span=e.span)
    if isinstance(e, Children):
        name = mapping.get(e.var, e.var)
        return e if name == e.var else Children(name, span=e.span)
    if isinstance(e, Concat):
        return Concat(rename_bound_expr(e.left, used, mapping),
                      rename_bound_expr(e.right, used, mapping), span=e.span)
    if isinstance(e, Elem):
        return Elem(e.label, rename_bound_expr(e.content, used, mapping),
                    span=e.span)
    if isinstance(e, If):
        return If(rename_bound_expr(e.cond, used, mapping),
                  rename_bound_expr(e.then, used, mapping),
                  rename_bound_expr(e.els, used, mapping), span=e.span)
    if isinstance(e, LabelFilter):
        return LabelFilter(rename_bound_expr(e.source, used, mapping),
                           e.label, span=e.span)
    if isinstance(e, Call):
        return Call(e.name, tuple(rename_bound_expr(a, used, mapping)
                                  for a in e.args), span=e.span)
    if isinstance(e, Let):
        bound = rename_bound_expr(e.bound, used, mapping)
        fresh = _pick_fresh(e.var, used)
        body = rename_bound_expr(e.body, used | {fresh},
                                 {**mapping, e.var: fresh})
        return Let(fresh, bound, body, span=e.span)
    if isinstance(e, For):
        source = rename_bound_expr(e.source, used, mapping)
        fresh = _pick_fresh(e.var, used)
        body = rename_bound_expr(e.body, used | {fresh},
                                 {**mapping, e.var: fresh})
        return For(fresh, source, body, span=e.span)
    return e


def rename_bound_stmt(s: UpdateStmt, used: set[str],
                      mapping: dict[str, str] | None = None) -> UpdateStmt:
    mapping = mapping or {}
    if isinstance(s, SeqStmt):
        return SeqStmt(rename_bound_stmt(s.first, used, mapping),
                       rename_bound_stmt(s.second, used, mapping), span=s.span)
    if isinstance(s, IfStmt):
        return IfStmt(rename_bound_expr(s.cond, used, mapping),
                      rename_bound_stmt(s.then, used, mapping),
                      rename_bound_stmt(s.els, used, mapping), span=s.span)
    if isinstance(s, LetStmt):
        bound = rename_bound_expr(s.bound, used, mapping)
        fresh = _pick_fresh(s.var, used)
        body = rename_bound_stmt(s.body, used | {fresh},
                                 {**mapping, s.var: fresh})
        return LetStmt(fresh, bound, body, span=s.span)
    if isinstance(s, Snapshot):
        fresh = _pick_fresh(s.var, used)
        body = rename_bound_stmt(s.body, used | {fresh},
                                 {**mapping, s.var: fresh})
        return Snapshot(fresh, body, span=s.span)
    if isinstance(s, Insert):
        return Insert(rename_bound_expr(s.expr, used, mapping), span=s.span)
    if isinstance(s, Test):
        return Test(s.test, rename_bound_stmt(s.body, used, mapping),
                    span=s.span)
    if isinstance(s, Nav):
        return Nav(s.direction, rename_bound_stmt(s.body, used, mapping),
                   span=s.span)
    if isinstance(s, ProcCall):
        return ProcCall(s.name, tuple(rename_bound_expr(a, used, mapping)
                                      for a in s.args), span=s.span)
    return s


# -- public entry points -----------------------------------------------


def parse_program(text: str, filename: str = "<input>") -> tuple[
        QueryProgram | UpdateProgram, Signature]:
    """Parse a full program; returns the program plus its type signature."""
    return _Parser(text, filename).parse_program()


def parse_type(text: str, filename: str = "<type>") -> Type:
    p = _Parser(text, filename)
    t = p.parse_type()
    p.expect("EOF", "end of type")
    return t


def parse_value(text: str, filename: str = "<value>") -> Forest:
    p = _Parser(text, filename)
    v = p.parse_forest()
    p.expect("EOF", "end of value")
    return v


def parse_expr(text: str, filename: str = "<expr>") -> QueryExpr:
    p = _Parser(text, filename)
    e = p.parse_expr()
    p.expect("EOF", "end of expression")
    return rename_bound_expr(e, free_names_expr(e))


def parse_stmt(text: str, filename: str = "<stmt>") -> UpdateStmt:
    p = _Parser(text, filename)
    s = p.parse_stmt()
    p.expect("EOF", "end of statement")
    return rename_bound_stmt(s, free_names_stmt(s))


def parse_signature(text: str, filename: str = "<sig>") -> Signature:
    return _Parser(text, filename).parse_signature()


def parse_env_bindings(specs: list[str]) -> dict[str, Forest]:
    """CLI ``--env`` parsing: ``name=VALUE`` items, ``;``-separated."""
    env: dict[str, Forest] = {}
    for spec in specs:
        for item in spec.split(";"):
            item = item.strip()
            if not item:
                continue
            name, eq, value_text = item.partition("=")
            name = name.strip().lstrip("$")
            if not eq or not name:
                raise ParseError(f"bad binding {item!r}; expected name=VALUE",
                                 0, 1, 1)
            env[name] = parse_value(value_text.strip())
    return env
