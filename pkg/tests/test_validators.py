import pytest

from api.validators import (
    parse_identifier_list, sanitize_condition, validate_analysis_options,
    validate_manifest, validate_mock_script, validate_report,
)


def test_manifest_accepts_minimal_entries():
    valid, errors = validate_manifest([
        {"file": "a.mini", "post": "x > 0", "expected": "HOLDS"},
        {"file": "b.c", "language": "c", "function": "f", "expected": "COUNTEREXAMPLE"},
    ])
    assert valid, errors


@pytest.mark.parametrize("manifest", [
    {"file": "a.mini"},
    [{"file": "a.mini"}],
    [{"file": "a.mini", "expected": "MAYBE"}],
    [{"file": "a.mini", "expected": "HOLDS", "extra": 1}],
    [{"file": "a.mini", "expected": "HOLDS", "post_vars": ["1x"]}],
])
def test_manifest_rejects_bad_entries(manifest):
    valid, errors = validate_manifest(manifest)
    assert not valid
    assert errors


def test_mock_script_schema():
    assert validate_mock_script({})[0]
    assert validate_mock_script({"0" * 64: "FAIL"})[0]
    assert not validate_mock_script({"0" * 64: "fail"})[0]
    assert not validate_mock_script({"short": "PASS"})[0]
    assert not validate_mock_script(["PASS"])[0]


def test_report_schema_requires_core_fields():
    valid, errors = validate_report({"unit": "a.mini"})
    assert not valid
    assert any("verdict" in error for error in errors)


def test_identifier_lists():
    assert parse_identifier_list(None) == (True, [], [])
    assert parse_identifier_list("xs, n") == (True, ["xs", "n"], [])
    assert parse_identifier_list("<output>")[0]
    valid, names, errors = parse_identifier_list("a, 2b")
    assert not valid
    assert names == ["a", "2b"]
    assert errors == ["'2b' is not an identifier"]
    assert not parse_identifier_list(" , ")[0]


def test_analysis_options():
    assert validate_analysis_options(max_partitions=4, parallel=2, best_of=1, function="main") == (True, [])
    valid, errors = validate_analysis_options(max_partitions=0, parallel=0, best_of=0, function="a-b")
    assert not valid
    assert len(errors) == 4


def test_sanitize_condition():
    assert sanitize_condition("  x > 0\x07 ") == "x > 0"
    assert sanitize_condition("a" * 10, max_length=4) == "aaaa"
    assert sanitize_condition(5) == "5"
