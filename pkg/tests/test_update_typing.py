"""Algorithmic update typechecking: the statement judgment with
multiplicities, iteration, and program checking."""

import pytest

from fluxq import (
    BOOL, EMPTY, EMPTY_DECLS, EMPTY_SIGNATURE, ForestBinding, GlobalDecls,
    Multiplicity, ProcedureSig, Signature, Skip, TypeCheckFailure, Var,
    check_stmt, check_update_program, parse_program, parse_stmt, parse_type,
    synth_iter, synth_stmt,
)

E = EMPTY_SIGNATURE
SING = Multiplicity.SINGULAR
PLUR = Multiplicity.PLURAL
TREE_SIG = Signature({"Tree": parse_type("tree[leaf[string] | node[Tree*]]")})
LEAFUPD_DECLS = GlobalDecls(procedures={
    "leafupd": ProcedureSig((parse_type("string"),), parse_type("Tree"),
                            parse_type("Tree")),
})


def synth(text, mult, t, env=None, decls=EMPTY_DECLS, sig=E):
    return synth_stmt(decls, sig, env or {}, mult, parse_type(t),
                      parse_stmt(text))


class TestSynthStmt:
    def test_skip_is_identity(self):
        assert synth("skip", PLUR, "a[]*,b[]") == parse_type("a[]*,b[]")
        assert synth("skip", SING, "a[]") == parse_type("a[]")

    def test_insert_after_each_matching_child(self):
        got = synth("iter[a?children[iter[b? right[insert c[]]]]]", PLUR,
                    "a[b[]*,c[]],d[]")
        assert got == parse_type("a[(b[],c[])*,c[]],d[]")

    def test_rename_rewrites_label(self):
        assert synth("rename n", SING, "m[b[]]") == parse_type("n[b[]]")

    def test_unmatched_test_returns_focus_unchanged(self):
        assert synth("b?skip", SING, "c[]") == parse_type("c[]")
        assert synth("b?insert d[]", SING, "c[]") == parse_type("c[]")

    def test_matched_test_runs_body(self):
        assert synth("b?delete", SING, "b[]") == EMPTY
        assert synth("*?rename n", SING, "m[]") == parse_type("n[]")
        assert synth("bool?skip", SING, "bool") == BOOL

    def test_insert_on_empty_plural_focus(self):
        assert synth("insert c[]", PLUR, "()") == parse_type("c[]")

    def test_delete_yields_empty(self):
        assert synth("delete", PLUR, "a[]*") == EMPTY
        assert synth("delete", SING, "a[]") == EMPTY

    def test_left_right_grow_around_focus(self):
        assert synth("left[insert c[]]", PLUR, "b[]") == parse_type("c[],b[]")
        assert synth("right[insert c[]]", SING, "b[]") == parse_type("b[],c[]")

    def test_children_rewraps_element(self):
        assert synth("children[delete]", SING, "a[b[]*]") == parse_type("a[()]")

    def test_sequencing_threads_types(self):
        assert synth("delete; insert c[]", PLUR, "a[]") == parse_type("c[]")

    def test_sequencing_after_delete_at_singular(self):
        # the focus type may become plural mid-sequence; later statements
        # still check at the same multiplicity
        assert synth("delete; skip", SING, "a[]") == EMPTY

    def test_if_joins_branches(self):
        got = synth("if true then delete else skip", PLUR, "a[]")
        assert got == parse_type("()|a[]")

    def test_snapshot_binds_focus(self):
        got = synth("snapshot $db in children[(delete; insert $db)]", SING,
                    "a[b[]]")
        assert got == parse_type("a[a[b[]]]")

    def test_let_binds_query_result(self):
        got = synth('let $x = c[] in (delete; insert $x)', PLUR, "b[]*")
        assert got == parse_type("c[]")

    def test_procedure_call_uses_declared_output(self):
        env = {"x": ForestBinding(parse_type("string"))}
        got = synth("leafupd($x)", SING,
                    "tree[leaf[string]|node[Tree*]]", env, LEAFUPD_DECLS,
                    TREE_SIG)
        assert got == Var("Tree")


class TestSynthStmtErrors:
    def expect_rule(self, rule, text, mult, t, env=None, decls=EMPTY_DECLS,
                    sig=E):
        with pytest.raises(TypeCheckFailure) as exc:
            synth(text, mult, t, env, decls, sig)
        assert exc.value.diagnostic.rule == rule
        return exc.value.diagnostic

    def test_insert_requires_plural(self):
        self.expect_rule("update/insert-multiplicity", "insert c[]", SING, "a[]")

    def test_insert_requires_empty_focus(self):
        diag = self.expect_rule("update/insert-focus", "insert c[]", PLUR,
                                "a[]*")
        assert "left[...]" in diag.message or "left" in diag.message

    def test_insert_requires_syntactically_empty_focus(self):
        self.expect_rule("update/insert-focus", "insert c[]", PLUR, "()|()")

    def test_rename_requires_singular(self):
        self.expect_rule("update/rename-multiplicity", "rename n", PLUR, "a[]")

    def test_rename_requires_element(self):
        self.expect_rule("update/rename-focus", "rename n", SING, "bool")

    def test_test_requires_singular(self):
        self.expect_rule("update/test-multiplicity", "b?skip", PLUR, "b[]*")

    def test_test_requires_atomic_focus(self):
        self.expect_rule("update/test-focus", "delete; b?skip", SING, "b[]")

    def test_children_requires_element(self):
        self.expect_rule("update/children-focus", "children[skip]", SING,
                         "bool")

    def test_children_requires_singular(self):
        self.expect_rule("update/children-multiplicity", "children[skip]",
                         PLUR, "a[b[]]")

    def test_iter_requires_plural(self):
        self.expect_rule("update/iter-multiplicity", "iter[skip]", SING, "a[]")

    def test_condition_must_be_boolean(self):
        self.expect_rule("update/if-condition", 'if "s" then skip else skip',
                         PLUR, "a[]")

    def test_undeclared_procedure(self):
        self.expect_rule("update/call-undeclared", "nope()", PLUR, "a[]")

    def test_procedure_input_not_subtype(self):
        self.expect_rule("update/call-input", 'leafupd("s")', PLUR, "b[]",
                         None, LEAFUPD_DECLS, TREE_SIG)

    def test_procedure_argument_not_subtype(self):
        self.expect_rule("update/call-argument", "leafupd(true)", SING,
                         "tree[leaf[string]|node[Tree*]]", None,
                         LEAFUPD_DECLS, TREE_SIG)


class TestSynthIter:
    def test_iteration_grows_matching_atoms(self):
        got = synth_iter(EMPTY_DECLS, E, {}, parse_type("b[]*,c[]"),
                         parse_stmt("b?right[insert c[]]"))
        assert got == parse_type("(b[],c[])*,c[]")

    def test_empty_focus(self):
        assert synth_iter(EMPTY_DECLS, E, {}, EMPTY, parse_stmt("delete")) == EMPTY

    def test_recursive_procedure_iteration(self):
        env = {"x": ForestBinding(parse_type("string"))}
        got = synth_iter(LEAFUPD_DECLS, TREE_SIG, env, parse_type("Tree*"),
                         parse_stmt("leafupd($x)"))
        assert got == parse_type("Tree*")


class TestCheckStmt:
    def test_insert_update_against_expected_type(self):
        ok, diag = check_stmt(
            EMPTY_DECLS, E, {}, PLUR, parse_type("a[b[]*,c[]],d[]"),
            parse_stmt("iter[a?children[iter[b? right[insert c[]]]]]"),
            parse_type("a[(b[],c[])*,c[]],d[]"))
        assert ok and diag is None

    def test_skip_against_wrong_type(self):
        ok, diag = check_stmt(EMPTY_DECLS, E, {}, SING, parse_type("b[]"),
                              Skip(), parse_type("c[]"))
        assert not ok
        assert diag.rule == "update/ascription"

    def test_delete_against_empty(self):
        ok, _ = check_stmt(EMPTY_DECLS, E, {}, PLUR, parse_type("a[]*,b[]"),
                           parse_stmt("delete"), EMPTY)
        assert ok


LEAFUPD_PROGRAM = """
type Tree = tree[leaf[string] | node[Tree*]]

declare procedure leafupd($x : string) : Tree => Tree {
  iter[children[iter[ leaf?children[(delete; insert $x)]
                    ; node?children[iter[leafupd($x)]] ]]]
};

update iter[leafupd("v")] : Tree* => Tree*
"""


class TestCheckUpdateProgram:
    def test_recursive_procedure_program_is_clean(self):
        prog, sig = parse_program(LEAFUPD_PROGRAM)
        assert check_update_program(sig, prog) == []

    def test_procedure_output_ascription_failure(self):
        prog, sig = parse_program(
            "declare procedure p() : b[] => () { skip };\n"
            "update skip : () => ()")
        diags = check_update_program(sig, prog)
        assert len(diags) == 1
        assert "in procedure p" in diags[0].message

    def test_main_update_widens_by_subtyping(self):
        prog, sig = parse_program("update skip : b[] => b[]*")
        assert check_update_program(sig, prog) == []

    def test_duplicate_procedure_diagnosed(self):
        prog, sig = parse_program(
            "declare procedure p() : () => () { skip };\n"
            "declare procedure p() : () => () { skip };\n"
            "update skip : () => ()")
        diags = check_update_program(sig, prog)
        assert any(d.rule == "program/duplicate-procedure" for d in diags)

    def test_functions_usable_inside_updates(self):
        prog, sig = parse_program(
            "declare function flag() : bool { true };\n"
            "update if flag() then delete else skip : a[] => a[]?")
        assert check_update_program(sig, prog) == []

    def test_undeclared_variable_in_annotations(self):
        prog, sig = parse_program("update skip : Gone => Gone")
        assert [d.rule for d in check_update_program(sig, prog)] == [
            "signature/undeclared"]
