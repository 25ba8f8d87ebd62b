import pytest

from models.unified_ast import NodeKind, ROLE_CONDITION, check_ranges
from services.frontend import (
    available_languages, build_hoare_spec, extract_annotations, get_adapter,
    language_for_path, parse_unit, read_unit, select_function,
)
from utils.exceptions import (
    AnnotationConflictError, NoPostConditionError, SourceReadError, UnknownLanguageError,
)
from tests.conftest import fixture_path

ANNOTATED = """# PRE: n >= 0
i := 1
while (i <= n) {
  i := i + 1
}
# POST: i = n + 1
"""


def test_mini_adapter_is_always_registered():
    assert "mini" in available_languages()
    assert language_for_path("prog.mini") == "mini"
    assert get_adapter("mini") is get_adapter("mini")


def test_unknown_language_and_extension():
    with pytest.raises(UnknownLanguageError):
        get_adapter("cobol")
    with pytest.raises(UnknownLanguageError):
        language_for_path("notes.txt")


def test_mini_unit_structure(set_loop_unit):
    root = set_loop_unit.root
    assert root.kind == NodeKind.BLOCK
    assert [child.kind for child in root.children] == [NodeKind.ASSIGNMENT, NodeKind.WHILE]
    assert not set_loop_unit.errors
    assert not check_ranges(root)

    loop = root.children[1]
    cond = loop.child_with_role(ROLE_CONDITION)
    assert set_loop_unit.source_text(cond) == "i <= n"
    assert set_loop_unit.effects_of(cond).uses == {"i", "n"}


def test_mini_effects_include_channels(set_loop_unit):
    loop_body = set_loop_unit.root.children[1].children[1]
    read, _, _, write, _ = [c for c in loop_body.children]
    assert set_loop_unit.effects_of(read).defs == {"x", "<input>"}
    assert set_loop_unit.effects_of(write).uses == {"z", "<output>"}


def test_syntax_error_degrades_to_one_opaque_node(mini_unit):
    unit = mini_unit("x := := 2")
    assert unit.errors
    [node] = unit.root.children
    assert node.kind == NodeKind.OTHER
    assert node.is_error
    assert unit.effects_of(node).opaque


def test_empty_file_has_no_statements(mini_unit):
    unit = mini_unit("")
    assert unit.root.children == ()
    assert not unit.errors


def test_read_unit_from_disk():
    unit = read_unit(fixture_path("example_simple.mini"))
    assert unit.language == "mini"
    assert unit.root.children[0].kind == NodeKind.IF


def test_read_unit_missing_file(tmp_path):
    with pytest.raises(SourceReadError):
        read_unit(str(tmp_path / "absent.mini"))


def test_comment_markers_carry_conditions(mini_unit):
    annotations = extract_annotations(mini_unit(ANNOTATED))
    assert annotations.pre == ["n >= 0"]
    assert annotations.post == ["i = n + 1"]
    assert not annotations.pinned


def test_bare_pre_marker_tags_an_assume(mini_unit):
    unit = mini_unit("assume(n > 0)  # PRE\nx := n\n# POST: x > 0\n")
    annotations = extract_annotations(unit)
    assert annotations.pre == ["n > 0"]
    assert [node.kind for node in annotations.pinned] == [NodeKind.ASSUME]


def test_bare_marker_on_plain_statement_is_ignored(mini_unit):
    annotations = extract_annotations(mini_unit("x := 1  # PRE\n"))
    assert annotations.pre == []
    assert len(annotations.markers) == 1


def test_conflicting_posts_are_rejected(mini_unit):
    with pytest.raises(AnnotationConflictError):
        extract_annotations(mini_unit("x := 1\n# POST: x > 0\n# POST: x > 1\n"))


def test_repeated_identical_post_is_kept_once(mini_unit):
    annotations = extract_annotations(mini_unit("x := 1\n# POST: x > 0\n# POST: x > 0\n"))
    assert annotations.post == ["x > 0"]


def test_supplied_post_overrides_and_pre_is_conjoined(mini_unit):
    unit = mini_unit(ANNOTATED)
    spec = build_hoare_spec(unit, extract_annotations(unit), pre="i = 0", post="i > n")
    assert spec.post == "i > n"
    assert spec.pre == "(n >= 0) && (i = 0)"


def test_in_file_conditions_are_used_when_none_supplied(mini_unit):
    unit = mini_unit(ANNOTATED)
    spec = build_hoare_spec(unit, extract_annotations(unit), post_vars=["i"])
    assert spec.pre == "n >= 0"
    assert spec.post == "i = n + 1"
    assert spec.post_vars == ("i",)


def test_missing_post_condition(mini_unit):
    unit = mini_unit("x := 1\n")
    with pytest.raises(NoPostConditionError) as exc_info:
        build_hoare_spec(unit, extract_annotations(unit))
    assert "no post-condition" in exc_info.value.message


def test_mini_region_is_the_whole_unit(set_loop_unit):
    assert select_function(set_loop_unit) is set_loop_unit.root


def test_python_function_with_pre_marker():
    pytest.importorskip("tree_sitter_python")
    unit = read_unit(fixture_path("closest_integer.py"))
    annotations = extract_annotations(unit)

    assert annotations.pre == ["len(value) > 0"]
    assert annotations.post == ["abs(res) <= abs(float(value))"]
    assert annotations.pinned[0].kind == NodeKind.ASSUME
    region = select_function(unit, annotations=annotations)
    assert region.kind == NodeKind.FUNCTION_DEF
    assert region.name_hint == "closest_integer"
