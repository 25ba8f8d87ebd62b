import pytest

from config.settings import settings
from services.cfg_builder import build_cfg
from models.hoare import HoareSpec
from services.frontend import parse_unit, select_function
from services.mini_parser import parse_mini
from services.orchestrator import AnalysisOrchestrator
from services.partitioner import gen_partitions
from services.renderer import gather_context, render_slice
from services.slicer import back_slice
from services.truncation import truncate, whole_program

HELPER_SOURCE = """def clamp(v):
    return min(v, 10)


def run(x):
    y = clamp(x)
    return y
"""


def test_mini_units_have_no_outside_context(set_loop_cfg, set_loop_unit):
    trunc = truncate(set_loop_cfg, gen_partitions(set_loop_cfg)[0], set_loop_unit)
    assert gather_context(trunc, set_loop_unit) == []


def test_whole_program_render(set_loop_cfg, set_loop_unit, set_loop_source):
    rendered = render_slice(whole_program(set_loop_cfg, set_loop_unit), set_loop_unit)
    assert rendered.text == set_loop_source
    assert rendered.token_count > 0
    assert not rendered.vacuous


def python_slice():
    pytest.importorskip("tree_sitter_python")
    unit = parse_unit(HELPER_SOURCE, "python", "helpers.py")
    cfg = build_cfg(unit, select_function(unit, name="run"))
    [part] = gen_partitions(cfg)
    return unit, back_slice(truncate(cfg, part, unit), cfg, {"y"})


def test_called_helper_is_pulled_in_as_context():
    unit, sliced = python_slice()
    [item] = gather_context(sliced, unit)
    assert item.name == "clamp"
    assert item.lines == 2
    assert not item.truncated

    rendered = render_slice(sliced, unit)
    assert rendered.text.startswith("def clamp(v):")
    assert "def clamp" not in render_slice(sliced, unit, include_context=False).text


def test_long_context_is_capped(monkeypatch):
    monkeypatch.setattr(settings, "CONTEXT_LINE_CAP", 1)
    unit, sliced = python_slice()
    [item] = gather_context(sliced, unit)
    assert item.truncated
    assert "1 more line(s)" in render_slice(sliced, unit).text


BRACED_ELSE_IF = "if (a > 0) {\n  a := 1\n} else {\n  if (b > 0) {\n    b := 1\n  }\n}\n"
KEYWORD_ELSE_IF = "if (a > 0) {\n  a := 1\n} else if (b > 0) {\n  b := 1\n}\n"


@pytest.mark.parametrize("source", [BRACED_ELSE_IF, KEYWORD_ELSE_IF])
def test_nested_conditional_in_else_renders_every_partition(mini_unit, source):
    unit = mini_unit(source)
    cfg = build_cfg(unit)
    assert render_slice(whole_program(cfg, unit), unit).text == source

    partitions = gen_partitions(cfg)
    assert len(partitions) == 3
    texts = []
    for part in partitions:
        trunc = truncate(cfg, part, unit)
        for sliced in (trunc, back_slice(trunc, cfg, {"b"})):
            text = render_slice(sliced, unit).text
            parse_mini(text)
            texts.append(text)
    assert any("b := 1" in text for text in texts)


def test_braced_else_with_single_if_prepares(mini_unit):
    unit = mini_unit(BRACED_ELSE_IF)
    batch = AnalysisOrchestrator().prepare(unit, HoareSpec("true", "b > 0"))
    assert len(batch.partitions) == 3
    assert batch.jobs
    for job in batch.jobs:
        parse_mini(job.rendered.text)
