import pytest

from services.range_map import DELETED, DirectiveKind, RangeMap, cleanup
from utils.exceptions import RenderError

TEXT = "abcdef"


def test_empty_map_emits_the_text():
    assert RangeMap().render(TEXT) == TEXT
    assert RangeMap().render(TEXT, 2, 4) == "cd"


def test_delete_leaves_a_sentinel():
    ranges = RangeMap()
    ranges.delete(1, 3)
    assert ranges.render(TEXT) == "a" + DELETED + "def"


def test_empty_delete_is_ignored():
    ranges = RangeMap()
    ranges.delete(2, 2)
    assert len(ranges) == 0


def test_outer_replace_wins_over_nested_directives():
    ranges = RangeMap()
    ranges.delete(2, 3)
    ranges.replace(1, 5, "X")
    assert ranges.render(TEXT) == "aXf"
    assert ranges.is_laminar()


def test_nested_directive_applies_inside_a_narrower_window():
    ranges = RangeMap()
    ranges.replace(0, 6, "whole")
    ranges.delete(2, 3)
    assert ranges.render(TEXT, 1, 4) == "b" + DELETED + "d"


def test_insertion_comes_before_a_range_starting_at_the_same_place():
    ranges = RangeMap()
    ranges.delete(1, 3)
    ranges.insert(1, "Z")
    assert ranges.render(TEXT) == "aZ" + DELETED + "def"


def test_segments_cover_the_window():
    ranges = RangeMap()
    ranges.replace(2, 4, "--")
    kinds = [(s.start, s.end, s.kind) for s in ranges.segments(0, 6)]
    assert kinds == [
        (0, 2, DirectiveKind.EMIT),
        (2, 4, DirectiveKind.REPLACE),
        (4, 6, DirectiveKind.EMIT),
    ]


def test_crossing_directives_are_rejected():
    ranges = RangeMap()
    ranges.delete(0, 3)
    with pytest.raises(RenderError):
        ranges.delete(2, 5)


def test_duplicate_range_is_rejected():
    ranges = RangeMap()
    ranges.replace(1, 3, "q")
    with pytest.raises(RenderError):
        ranges.delete(1, 3)


def test_inverted_range_is_rejected():
    with pytest.raises(RenderError):
        RangeMap().replace(4, 2, "")


def test_cleanup_drops_lines_emptied_by_deletion():
    raw = "x := 1\n  " + DELETED + "\ny := 2" + DELETED + "\n"
    assert cleanup(raw) == "x := 1\ny := 2\n"
