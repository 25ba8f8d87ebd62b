import pytest

from config.settings import settings
from services.frontend import build_hoare_spec, extract_annotations, read_unit
from services.orchestrator import AnalysisLimits, AnalysisOrchestrator
from services.partitioner import gen_partitions
from services.renderer import render_slice
from services.slicer import back_slice
from services.tokenizer import count_tokens, get_tokenizer
from services.truncation import truncate
from utils.exceptions import ConfigurationError
from tests.conftest import fixture_path
from tests.support import node_id, partition_where

TWO_ITERATION_PATH = """i := 1
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


@pytest.mark.parametrize("text, expected", [
    ("", 0),
    ("i := i + 1", 5),
    ("assume(!(x > y))", 9),
    ("while (i <= n) {", 7),
    ("if (a && b || !c) return p->next;", 14),
])
def test_default_counts(text, expected):
    assert count_tokens(text, "default") == expected


def test_default_tokenizer_follows_settings(monkeypatch):
    monkeypatch.setattr(settings, "TOKENIZER", "default")
    assert get_tokenizer().name == "default"
    assert get_tokenizer() is get_tokenizer("default")


def test_unknown_tokenizer():
    with pytest.raises(ConfigurationError):
        get_tokenizer("sentencepiece")


def test_tiktoken_counts_when_installed():
    pytest.importorskip("tiktoken")
    tokenizer = get_tokenizer("tiktoken")
    assert tokenizer.name.startswith("tiktoken:")
    assert tokenizer.count("i := i + 1") > 0


def else_only_counts(cfg, unit):
    part = partition_where(
        gen_partitions(cfg), covers=[node_id(cfg, "xs.insert")], avoids=[node_id(cfg, "xs.delete")],
    )
    trunc = truncate(cfg, part, unit)
    sliced = back_slice(trunc, cfg, {"n", "xs"})
    return (
        render_slice(trunc, unit, tokenizer="default").token_count,
        render_slice(sliced, unit, tokenizer="default").token_count,
    )


def test_else_only_slice_count_is_frozen(set_loop_cfg, set_loop_unit):
    truncation, sliced = else_only_counts(set_loop_cfg, set_loop_unit)
    assert sliced == 26
    assert truncation == 46


def test_slice_truncation_original_path_ordering(set_loop_cfg, set_loop_unit, set_loop_source):
    truncation, sliced = else_only_counts(set_loop_cfg, set_loop_unit)
    original = count_tokens(set_loop_source, "default")
    path = count_tokens(TWO_ITERATION_PATH, "default")

    assert (original, path) == (55, 94)
    assert sliced < truncation < original < path


def test_case_study_reduction():
    pytest.importorskip("tree_sitter_python")
    unit = read_unit(fixture_path("closest_integer.py"))
    annotations = extract_annotations(unit)
    spec = build_hoare_spec(unit, annotations)
    orchestrator = AnalysisOrchestrator(limits=AnalysisLimits(tokenizer="default"))
    batch = orchestrator.prepare(unit, spec, annotations)

    assert len(batch.partitions) > 1
    assert batch.jobs
    counts = [job.rendered.token_count for job in batch.jobs]
    assert all(count < batch.original_tokens for count in counts)
    # the best slice drops at least 40% of the function
    assert min(counts) <= 0.6 * batch.original_tokens
