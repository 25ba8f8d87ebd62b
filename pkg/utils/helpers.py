"""
Helper Utilities for the slice-and-ask analysis engine

Common utility functions used across the application:
- Time utilities
- Text fingerprints and identifier scanning
- Line / byte offset arithmetic over source text
"""

import hashlib
import re
from datetime import datetime, timezone
from typing import List, Set


# ============================================================================
# Time Utilities
# ============================================================================

def get_timestamp() -> str:
    """
    Get current timestamp in ISO format (UTC)

    Returns:
        ISO formatted timestamp string
    """
    return datetime.now(timezone.utc).isoformat()


def format_duration(seconds: float) -> str:
    """
    Format duration in seconds to human-readable string

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted string (e.g., "1.25s", "2m 5s")
    """
    if seconds < 60:
        return f"{seconds:.2f}s"
    minutes, secs = divmod(int(seconds), 60)
    if minutes < 60:
        return f"{minutes}m {secs}s"
    hours, minutes = divmod(minutes, 60)
    return f"{hours}h {minutes}m"


# ============================================================================
# Fingerprints and Identifiers
# ============================================================================

IDENTIFIER_PATTERN = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
_MEMBER_PATTERN = re.compile(r'(\.|->)\s*([A-Za-z_][A-Za-z0-9_]*)')
_STRING_PATTERN = re.compile(r'"(?:[^"\\\n]|\\.)*"|\'(?:[^\'\\\n]|\\.)*\'')


def fingerprint_text(text: str) -> str:
    """
    Stable fingerprint of a rendered slice

    Args:
        text: Rendered slice text

    Returns:
        Hex SHA-256 digest of the UTF-8 bytes

    Example:
        fingerprint_text("skip\\n") -> "2d7b..."
    """
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def strip_string_literals(text: str) -> str:
    """Blank out quoted string literals, keeping offsets intact"""
    return _STRING_PATTERN.sub(lambda m: ' ' * len(m.group(0)), text)


def identifiers_in(text: str, include_members: bool = True) -> List[str]:
    """
    Scan identifiers in order of appearance (duplicates removed)

    Args:
        text: Source or condition text
        include_members: When False, names reached through '.' or '->' are skipped

    Returns:
        List of identifiers

    Example:
        identifiers_in("db->key != NULL", include_members=False) -> ["db", "NULL"]
    """
    scrubbed = strip_string_literals(text)
    members = set()
    if not include_members:
        members = {m.start(2) for m in _MEMBER_PATTERN.finditer(scrubbed)}

    seen: List[str] = []
    for match in IDENTIFIER_PATTERN.finditer(scrubbed):
        if match.start() in members:
            continue
        if match.start() > 0 and scrubbed[match.start() - 1].isdigit():
            continue
        name = match.group(0)
        if name not in seen:
            seen.append(name)
    return seen


def member_names_in(text: str) -> Set[str]:
    """Names accessed through '.' or '->' in a condition"""
    return {m.group(2) for m in _MEMBER_PATTERN.finditer(strip_string_literals(text))}


# ============================================================================
# Offsets and Lines
# ============================================================================

def char_to_byte_offsets(text: str) -> List[int]:
    """
    Byte offset of every character position (plus the end position)

    Args:
        text: Decoded source text

    Returns:
        List of len(text) + 1 byte offsets
    """
    offsets = [0] * (len(text) + 1)
    total = 0
    for index, char in enumerate(text):
        offsets[index] = total
        total += len(char.encode('utf-8'))
    offsets[len(text)] = total
    return offsets


def line_start(text: str, pos: int) -> int:
    """Offset of the first character of the line holding pos"""
    return text.rfind('\n', 0, pos) + 1


def line_end(text: str, pos: int) -> int:
    """Offset of the newline ending the line holding pos (or len(text))"""
    end = text.find('\n', pos)
    return len(text) if end < 0 else end


def indentation_at(text: str, pos: int) -> str:
    """Leading whitespace of the line holding pos"""
    start = line_start(text, pos)
    end = start
    while end < len(text) and text[end] in ' \t':
        end += 1
    return text[start:end]


def reindent(text: str, remove: int) -> str:
    """
    Remove up to `remove` leading blanks from every line after the first

    Args:
        text: Multi-line text whose first line starts mid-line
        remove: Number of columns to strip

    Returns:
        Re-indented text
    """
    if remove <= 0:
        return text
    lines = text.split('\n')
    out = [lines[0]]
    for line in lines[1:]:
        strip = 0
        while strip < remove and strip < len(line) and line[strip] in ' \t':
            strip += 1
        out.append(line[strip:])
    return '\n'.join(out)

