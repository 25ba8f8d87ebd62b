from services.cfg_builder import build_cfg
from services.partitioner import gen_partitions
from services.renderer import render_slice
from services.slicer import back_slice
from services.truncation import truncate
from tests.support import node_id, partition_where

ELSE_ONLY_SLICE = """i := 1
while (i <= n) {
  read(x)
  xs.insert(x)
  i := i + 1
}
"""

THEN_ONLY_SLICE = """i := 1
while (i <= n) {
  read(x)
  xs.delete(-x)
  i := i + 1
}
"""


def sliced_text(cfg, unit, partition, criterion, **kwargs):
    sliced = back_slice(truncate(cfg, partition, unit), cfg, criterion, **kwargs)
    return sliced, render_slice(sliced, unit, include_context=False)


def test_else_only_partition_keeps_what_the_size_depends_on(set_loop_cfg, set_loop_unit):
    cfg = set_loop_cfg
    part = partition_where(
        gen_partitions(cfg), covers=[node_id(cfg, "xs.insert")], avoids=[node_id(cfg, "xs.delete")],
    )
    sliced, rendered = sliced_text(cfg, set_loop_unit, part, {"n", "xs"})

    assert rendered.text == ELSE_ONLY_SLICE
    assert sliced.sliced
    assert sliced.criterion_vars == {"n", "xs"}
    assert sliced.kept_nodes == {
        node_id(cfg, "i := 1"), node_id(cfg, "i <= n"), node_id(cfg, "read(x)"),
        node_id(cfg, "xs.insert"), node_id(cfg, "i := i + 1"),
    }
    assert not sliced.synth_assumes
    assert sliced.stmt_count == 5


def test_then_only_partition_drops_the_branch_assumption(set_loop_cfg, set_loop_unit):
    cfg = set_loop_cfg
    part = partition_where(
        gen_partitions(cfg), covers=[node_id(cfg, "xs.delete")], avoids=[node_id(cfg, "xs.insert")],
    )
    _, rendered = sliced_text(cfg, set_loop_unit, part, {"n", "xs"})
    assert rendered.text == THEN_ONLY_SLICE


def test_zero_iteration_slice_keeps_the_loop_exit(set_loop_cfg, set_loop_unit):
    part = partition_where(gen_partitions(set_loop_cfg), avoids=[node_id(set_loop_cfg, "read(x)")])
    _, rendered = sliced_text(set_loop_cfg, set_loop_unit, part, {"n", "xs"})
    assert rendered.text == "i := 1\nassume(!(i <= n))\n"


def test_assumption_is_kept_only_when_it_constrains_the_criterion(simple_cfg, simple_unit):
    _, second = gen_partitions(simple_cfg)

    _, with_y = sliced_text(simple_cfg, simple_unit, second, {"z", "y"})
    assert with_y.text == "assume(!(x > y))\nz := x * y\n"

    _, only_z = sliced_text(simple_cfg, simple_unit, second, {"z"})
    assert only_z.text == "z := x * y\n"


def test_unrelated_statements_are_removed(mini_unit):
    unit = mini_unit("x := 1\ny := 2\n")
    cfg = build_cfg(unit)
    [part] = gen_partitions(cfg)
    _, rendered = sliced_text(cfg, unit, part, {"y"})
    assert rendered.text == "y := 2\n"


def test_reads_before_a_kept_read_survive(mini_unit):
    unit = mini_unit("read(a)\nread(b)\nc := b\n")
    cfg = build_cfg(unit)
    [part] = gen_partitions(cfg)
    _, rendered = sliced_text(cfg, unit, part, {"c"})
    assert rendered.text == "read(a)\nread(b)\nc := b\n"


def test_pinned_statement_survives(mini_unit):
    unit = mini_unit("x := 1\ny := 2\n")
    cfg = build_cfg(unit)
    [part] = gen_partitions(cfg)
    pinned = frozenset({cfg.nodes[node_id(cfg, "x := 1")].ast_ref})
    sliced, rendered = sliced_text(cfg, unit, part, {"y"}, pinned=pinned)
    assert rendered.text == "x := 1\ny := 2\n"
    assert node_id(cfg, "x := 1") in sliced.kept_nodes


def test_empty_criterion_keeps_every_assumption(simple_cfg, simple_unit):
    first, _ = gen_partitions(simple_cfg)
    sliced, rendered = sliced_text(simple_cfg, simple_unit, first, set())
    assert len(sliced.synth_assumes) == 1
    assert rendered.text.startswith("assume(x > y)")


def test_loop_condition_survives_when_its_body_does(mini_unit):
    unit = mini_unit("i := 0\ns := 0\nwhile (i < n) {\n  s := s + i\n  i := i + 1\n}\n")
    cfg = build_cfg(unit)
    entered = partition_where(gen_partitions(cfg), covers=[node_id(cfg, "s := s + i")])
    sliced, rendered = sliced_text(cfg, unit, entered, {"s"})

    assert node_id(cfg, "i < n") in sliced.kept_nodes
    assert rendered.text == "i := 0\ns := 0\nwhile (i < n) {\n  s := s + i\n  i := i + 1\n}\n"
