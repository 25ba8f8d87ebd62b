from models.slice_program import THoist, TIf, TLoop, TStmt, TUnreach, iter_items
from services.cfg_builder import build_cfg
from services.partitioner import gen_partitions
from services.renderer import render_slice
from services.truncation import truncate, whole_program
from tests.support import node_id, partition_where

ELSE_ONLY = """i := 1
while (i <= n) {
  read(x)
  assume(!(x < 0))
  xs.insert(x)
  z := xs.size()
  write(z)
  i := i + 1
}
"""


def else_only(cfg):
    return partition_where(
        gen_partitions(cfg),
        covers=[node_id(cfg, "xs.insert")],
        avoids=[node_id(cfg, "xs.delete")],
    )


def test_one_sided_branch_in_loop_is_hoisted(set_loop_cfg, set_loop_unit):
    trunc = truncate(set_loop_cfg, else_only(set_loop_cfg), set_loop_unit)

    [hoist] = [item for item in iter_items(trunc.tree) if isinstance(item, THoist)]
    assert hoist.polarity is False
    assert hoist.node_id == node_id(set_loop_cfg, "x < 0")
    assert [s.condition_text for s in trunc.synth_assumes] == ["x < 0"]
    assert node_id(set_loop_cfg, "xs.delete") not in trunc.kept_nodes
    assert trunc.stmt_count == 8
    assert render_slice(trunc, set_loop_unit).text == ELSE_ONLY


def test_loop_never_entered_becomes_an_assumption(set_loop_cfg, set_loop_unit):
    zero = partition_where(gen_partitions(set_loop_cfg), avoids=[node_id(set_loop_cfg, "read(x)")])
    trunc = truncate(set_loop_cfg, zero, set_loop_unit)

    assert isinstance(trunc.tree.items[1], THoist)
    assert trunc.stmt_count == 2
    assert render_slice(trunc, set_loop_unit).text == "i := 1\nassume(!(i <= n))\n"


def test_fully_covered_partition_renders_the_original(set_loop_cfg, set_loop_unit, set_loop_source):
    both = partition_where(
        gen_partitions(set_loop_cfg),
        covers=[node_id(set_loop_cfg, "xs.insert"), node_id(set_loop_cfg, "xs.delete")],
    )
    trunc = truncate(set_loop_cfg, both, set_loop_unit)

    assert isinstance(trunc.tree.items[1], TLoop)
    assert not trunc.synth_assumes
    assert render_slice(trunc, set_loop_unit).text == set_loop_source


def test_branch_outside_loop(simple_cfg, simple_unit):
    first, second = gen_partitions(simple_cfg)
    assert render_slice(truncate(simple_cfg, first, simple_unit), simple_unit).text == "assume(x > y)\nz := x + 2\n"
    assert render_slice(truncate(simple_cfg, second, simple_unit), simple_unit).text == "assume(!(x > y))\nz := x * y\n"


def test_without_simplification_uncovered_code_is_marked(set_loop_cfg, set_loop_unit):
    trunc = truncate(set_loop_cfg, else_only(set_loop_cfg), set_loop_unit, simplify=False)

    items = list(iter_items(trunc.tree))
    assert any(isinstance(item, TIf) for item in items)
    assert [type(item) for item in items].count(TUnreach) == 1
    assert len(trunc.unreachable_marks) == 1
    assert not trunc.synth_assumes
    assert "assume(false)" in render_slice(trunc, set_loop_unit).text


def test_one_armed_branch_inside_loop_stays_conditional(mini_unit):
    unit = mini_unit("while (i < 3) {\n  if (i = 1) {\n    j := 1\n  }\n  i := i + 1\n}\n")
    cfg = build_cfg(unit)
    taken = partition_where(gen_partitions(cfg), covers=[node_id(cfg, "j := 1")])

    trunc = truncate(cfg, taken, unit)
    loop = trunc.tree.items[0]
    assert isinstance(loop, TLoop)
    assert isinstance(loop.body.items[0], TIf)


def test_one_armed_branch_outside_loop_is_hoisted(mini_unit):
    unit = mini_unit("if (a > 0) {\n  a := 0\n}\nb := a\n")
    cfg = build_cfg(unit)
    skipped = partition_where(gen_partitions(cfg), avoids=[node_id(cfg, "a := 0")])

    trunc = truncate(cfg, skipped, unit)
    assert isinstance(trunc.tree.items[0], THoist)
    assert render_slice(trunc, unit).text == "assume(!(a > 0))\nb := a\n"


def test_whole_program_keeps_everything(set_loop_cfg, set_loop_unit, set_loop_source):
    trunc = whole_program(set_loop_cfg, set_loop_unit)
    statements = {item.node_id for item in iter_items(trunc.tree) if isinstance(item, TStmt)}

    assert len(statements) == 7
    assert not trunc.vacuous
    assert render_slice(trunc, set_loop_unit).text == set_loop_source
