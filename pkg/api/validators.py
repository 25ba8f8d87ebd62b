"""
Input Validators

JSON schemas for the files the engine reads and writes (bench manifests,
mock oracle scripts, analysis reports) and checks for command-line options.
Every validator returns (is_valid, errors).
"""

from typing import Any, Dict, List, Optional, Tuple
import re

from jsonschema import Draft7Validator

from models.hoare import Outcome
from models.mini_ast import INPUT_CHANNEL, OUTPUT_CHANNEL


IDENTIFIER_PATTERN = r'^[A-Za-z_][A-Za-z0-9_]*$'
FINGERPRINT_PATTERN = r'^[0-9a-f]{64}$'

MANIFEST_SCHEMA: Dict[str, Any] = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["file", "expected"],
        "properties": {
            "file": {"type": "string", "minLength": 1},
            "language": {"type": "string"},
            "pre": {"type": "string"},
            "post": {"type": "string", "minLength": 1},
            "post_vars": {"type": "array", "items": {"type": "string", "pattern": IDENTIFIER_PATTERN}},
            "function": {"type": "string", "pattern": IDENTIFIER_PATTERN},
            "mock_script": {"type": "string"},
            "expected": {"enum": ["HOLDS", "COUNTEREXAMPLE"]},
        },
        "additionalProperties": False,
    },
}

MOCK_SCRIPT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "patternProperties": {
        FINGERPRINT_PATTERN: {"enum": [outcome.value for outcome in Outcome]},
    },
    "additionalProperties": False,
}

_SLICE_RECORD_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["partition", "stmt_count", "token_count", "outcome", "latency", "fingerprint"],
    "properties": {
        "partition": {"type": "integer", "minimum": 0},
        "stmt_count": {"type": "integer", "minimum": 0},
        "token_count": {"type": "integer", "minimum": 0},
        "outcome": {"enum": [outcome.value for outcome in Outcome] + ["NOT_QUERIED"]},
        "latency": {"type": "number", "minimum": 0},
        "fingerprint": {"type": "string", "pattern": FINGERPRINT_PATTERN},
    },
}

REPORT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["schema_version", "unit", "verdict", "per_slice", "totals", "config", "stages"],
    "properties": {
        "schema_version": {"type": "string"},
        "unit": {"type": "string"},
        "verdict": {"enum": ["HOLDS", "COUNTEREXAMPLE", "INCONCLUSIVE"]},
        "counterexample": {"type": ["object", "null"]},
        "per_slice": {"type": "array", "items": _SLICE_RECORD_SCHEMA},
        "totals": {
            "type": "object",
            "required": ["slices", "queries", "tokens"],
            "properties": {
                "slices": {"type": "integer", "minimum": 0},
                "queries": {"type": "integer", "minimum": 0},
                "tokens": {"type": "integer", "minimum": 0},
            },
        },
        "config": {"type": "object"},
        "stages": {"type": "array"},
    },
}


def validate_against(data: Any, schema: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """
    Validate data against a JSON schema

    Args:
        data: Decoded JSON
        schema: Schema to check against

    Returns:
        Tuple of (is_valid: bool, errors: List[str]) with errors in path order
    """
    validator = Draft7Validator(schema)
    errors = []
    for error in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
        location = "/".join(str(part) for part in error.absolute_path) or "<root>"
        errors.append(f"{location}: {error.message}")
    return len(errors) == 0, errors


def validate_manifest(data: Any) -> Tuple[bool, List[str]]:
    """Validate a bench manifest (list of {file, language, pre, post, expected})"""
    return validate_against(data, MANIFEST_SCHEMA)


def validate_mock_script(data: Any) -> Tuple[bool, List[str]]:
    """Validate a mock oracle script ({fingerprint: outcome})"""
    return validate_against(data, MOCK_SCRIPT_SCHEMA)


def validate_report(data: Any) -> Tuple[bool, List[str]]:
    """Validate a serialized analysis report"""
    return validate_against(data, REPORT_SCHEMA)


def parse_identifier_list(text: Optional[str]) -> Tuple[bool, List[str], List[str]]:
    """
    Split a comma-separated identifier list (--post-vars)

    Returns:
        Tuple of (is_valid, identifiers, errors)
    """
    if text is None:
        return True, [], []
    names = [part.strip() for part in text.split(",") if part.strip()]
    errors = [
        f"'{name}' is not an identifier"
        for name in names
        if not re.match(IDENTIFIER_PATTERN, name) and name not in (INPUT_CHANNEL, OUTPUT_CHANNEL)
    ]
    if not names:
        errors.append("post-vars must name at least one identifier")
    return len(errors) == 0, names, errors


def validate_analysis_options(
    max_partitions: Optional[int] = None,
    parallel: Optional[int] = None,
    best_of: Optional[int] = None,
    function: Optional[str] = None,
) -> Tuple[bool, List[str]]:
    """
    Validate numeric and name options of analyze / slices / bench

    Returns:
        Tuple of (is_valid: bool, errors: List[str])
    """
    errors = []

    if max_partitions is not None and max_partitions < 1:
        errors.append("max-partitions must be positive")

    if parallel is not None and parallel < 1:
        errors.append("parallel must be positive")

    if best_of is not None and best_of < 1:
        errors.append("best-of must be positive")

    if function is not None and not re.match(IDENTIFIER_PATTERN, function):
        errors.append(f"function '{function}' is not an identifier")

    return len(errors) == 0, errors


def sanitize_condition(value: str, max_length: int = 4000) -> str:
    """
    Clean a condition given on the command line

    Args:
        value: Condition text
        max_length: Maximum allowed length

    Returns:
        Text without control characters, truncated and stripped
    """
    if not isinstance(value, str):
        return str(value)
    sanitized = ''.join(char for char in value if char.isprintable())
    return sanitized[:max_length].strip()
