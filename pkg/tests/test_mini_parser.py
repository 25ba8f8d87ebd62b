import pytest

from models.mini_ast import (
    Assign, Assume, BinOp, BoolLit, BoolOp, Compare, IfThenElse, IntLit, Neg, Not, Read, Seq,
    SeqLit, SeqOp, SeqSize, Skip, Var, While, Write, flatten_seq, program_vars,
)
from services.mini_parser import format_expr, parse_expression, parse_mini, pretty_print, tokenize
from utils.exceptions import MiniSyntaxError


def test_skip_parses_to_skip():
    assert parse_mini("skip") == Skip()


def test_empty_program_is_an_implicit_skip():
    prog = parse_mini("\n\n")
    assert isinstance(prog, Skip)
    assert prog.implicit
    assert pretty_print(prog) == ""


def test_loop_program_structure(set_loop_source):
    stmts = flatten_seq(parse_mini(set_loop_source))

    assert stmts[0] == Assign("i", IntLit(1))
    loop = stmts[1]
    assert isinstance(loop, While)
    assert loop.cond == Compare("<=", Var("i"), Var("n"))

    body = flatten_seq(loop.body)
    assert [type(s) for s in body] == [Read, IfThenElse, Assign, Write, Assign]
    branch = body[1]
    assert branch.then_branch == Assign("xs", SeqOp("delete", Var("xs"), Neg(Var("x"))))
    assert branch.else_branch == Assign("xs", SeqOp("insert", Var("xs"), Var("x")))
    assert body[2] == Assign("z", SeqSize(Var("xs")))


def test_missing_expression_is_a_syntax_error():
    with pytest.raises(MiniSyntaxError) as exc_info:
        parse_mini("x := ")
    assert exc_info.value.line == 1
    assert "missing expression" in exc_info.value.reason


def test_syntax_error_reports_line_and_column():
    with pytest.raises(MiniSyntaxError) as exc_info:
        parse_mini("x := 1\ny := )")
    assert exc_info.value.line == 2
    assert exc_info.value.column == 6


@pytest.mark.parametrize("source", ["if := 1", "true := 2", "read(while)"])
def test_reserved_words_are_not_variables(source):
    with pytest.raises(MiniSyntaxError):
        parse_mini(source)


def test_unknown_character_is_rejected():
    with pytest.raises(MiniSyntaxError):
        parse_mini("x := 1 $ 2")


def test_semicolons_separate_statements():
    stmts = flatten_seq(parse_mini("x := 1; y := 2"))
    assert stmts == [Assign("x", IntLit(1)), Assign("y", IntLit(2))]


def test_single_equals_compares():
    assert parse_expression("a = b") == Compare("==", Var("a"), Var("b"))


def test_multiplication_binds_tighter_than_addition():
    assert parse_expression("1 + 2 * 3") == BinOp("+", IntLit(1), BinOp("*", IntLit(2), IntLit(3)))


def test_connectives_and_negation():
    expr = parse_expression("!(x < 0) && y >= 1 || false")
    assert expr == BoolOp(
        "||",
        BoolOp("&&", Not(Compare("<", Var("x"), IntLit(0))), Compare(">=", Var("y"), IntLit(1))),
        BoolLit(False),
    )


def test_sequence_literals_and_size():
    assert parse_expression("[1, 2]") == SeqLit((IntLit(1), IntLit(2)))
    assert parse_expression("[]") == SeqLit(())
    assert parse_expression("xs.size()") == SeqSize(Var("xs"))


def test_negative_literal_folds_into_the_literal():
    assert parse_expression("-3") == IntLit(-3)
    assert parse_expression("-x") == Neg(Var("x"))


def test_else_if_nests_a_conditional():
    prog = parse_mini("if (a < 1) { x := 1 } else if (a < 2) { x := 2 } else { x := 3 }")
    assert isinstance(prog, IfThenElse)
    assert isinstance(prog.else_branch, IfThenElse)
    assert prog.else_branch.else_branch == Assign("x", IntLit(3))


def test_missing_else_is_an_implicit_skip():
    prog = parse_mini("if (a < 1) {\n  x := 1\n}")
    assert isinstance(prog.else_branch, Skip)
    assert prog.else_branch.implicit


def test_comments_are_collected_separately():
    tokens, comments = tokenize("x := 1  # set x\n")
    assert [c.text for c in comments] == ["# set x"]
    assert all(t.kind != "COMMENT" for t in tokens)


def test_spans_cover_statement_text(set_loop_source):
    loop = flatten_seq(parse_mini(set_loop_source))[1]
    assert set_loop_source[loop.cond_span.start:loop.cond_span.end] == "i <= n"
    assert set_loop_source[loop.span.start:loop.span.end].startswith("while (i <= n) {")
    assert set_loop_source[loop.span.start:loop.span.end].endswith("}")


def test_pretty_print_reproduces_canonical_text(set_loop_source):
    assert pretty_print(parse_mini(set_loop_source)) == set_loop_source


def test_pretty_print_then_parse_is_stable():
    source = "x := [1, 2]; x.insert(3 - -4); while (x.size() != 0 && !(y = 2)) { x.delete(1) }"
    once = pretty_print(parse_mini(source))
    assert pretty_print(parse_mini(once)) == once
    assert parse_mini(once) == parse_mini(source)


def test_format_expr_keeps_needed_parentheses():
    assert format_expr(parse_expression("(1 + 2) * 3")) == "(1 + 2) * 3"
    assert format_expr(parse_expression("1 - (2 - 3)")) == "1 - (2 - 3)"
    assert format_expr(parse_expression("!(x < 0)")) == "!(x < 0)"


def test_program_vars_leave_out_channels(set_loop_source):
    assert program_vars(parse_mini(set_loop_source)) == {"i", "n", "x", "xs", "z"}


def test_statement_kinds():
    stmts = flatten_seq(parse_mini("read(x)\nwrite(x + 1)\nassume(x > 0)"))
    assert stmts == [
        Read("x"),
        Write(BinOp("+", Var("x"), IntLit(1))),
        Assume(Compare(">", Var("x"), IntLit(0))),
    ]
    assert not isinstance(parse_mini("read(x)\nwrite(x)"), Skip)
    assert isinstance(parse_mini("read(x)\nwrite(x)"), Seq)
