import pytest

from config.settings import settings
from models.mini_ast import Assume, Assign, LinearPath, flatten_seq
from services.mini_parser import parse_mini
from services.path_unfolder import count_paths, unfold_bounded

SIMPLE_PATH = """
i := 1
assume(i <= n)
read(x)
assume(!(x < 0))
xs.insert(x)
z := xs.size()
write(z)
i := i + 1
assume(i <= n)
read(x)
assume(!(x < 0))
xs.insert(x)
z := xs.size()
write(z)
i := i + 1
assume(!(i <= n))
"""


def path(source):
    return LinearPath(tuple(flatten_seq(parse_mini(source))))


def test_conditional_gives_one_path_per_branch(simple_source):
    result = unfold_bounded(parse_mini(simple_source), 0)

    assert not result.truncated
    assert result.paths == {
        path("assume(x > y)\nz := x + 2"),
        path("assume(!(x > y))\nz := x * y"),
    }


def test_loop_unfold_contains_two_iteration_path(set_loop_source):
    result = unfold_bounded(parse_mini(set_loop_source), 2)

    assert len(result) == 7
    assert result.truncated
    assert path(SIMPLE_PATH) in result
    assert len(path(SIMPLE_PATH)) == 16


def test_zero_bound_only_skips_the_loop(set_loop_source):
    result = unfold_bounded(parse_mini(set_loop_source), 0)
    assert result.paths == {path("i := 1\nassume(!(i <= n))")}
    assert result.truncated


def test_straight_line_program_is_its_own_path():
    result = unfold_bounded(parse_mini("x := 1\ny := x"), 3)
    assert list(result) == [path("x := 1\ny := x")]
    assert not result.truncated


def test_implicit_else_contributes_only_the_assumption():
    result = unfold_bounded(parse_mini("if (a > 0) { a := 0 }"), 1)
    paths = {p.stmts for p in result}
    assert (Assume(parse_mini("assume(!(a > 0))").cond),) in paths
    assert len(result) == 2


@pytest.mark.parametrize("bound", [0, 1, 2, 3])
def test_count_matches_enumeration(set_loop_source, bound):
    prog = parse_mini(set_loop_source)
    assert len(unfold_bounded(prog, bound)) == count_paths(prog, bound)


def test_negative_bound_is_rejected():
    with pytest.raises(ValueError):
        unfold_bounded(parse_mini("skip"), -1)


def test_linear_path_rejects_compound_statements():
    with pytest.raises(ValueError):
        LinearPath((parse_mini("if (a > 0) { a := 0 }"),))
    assert LinearPath((Assign("a", parse_mini("a := 0").value),)).to_program() == parse_mini("a := 0")


def test_default_bound_comes_from_settings(set_loop_source, monkeypatch):
    monkeypatch.setattr(settings, "LOOP_UNFOLD_BOUND", 1)
    prog = parse_mini(set_loop_source)
    assert unfold_bounded(prog).paths == unfold_bounded(prog, 1).paths
