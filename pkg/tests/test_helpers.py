from utils.helpers import (
    char_to_byte_offsets, fingerprint_text, format_duration,
    identifiers_in, indentation_at, member_names_in, reindent, strip_string_literals,
)


def test_identifiers_skip_members_on_request():
    assert identifiers_in("db->key != NULL") == ["db", "key", "NULL"]
    assert identifiers_in("db->key != NULL", include_members=False) == ["db", "NULL"]
    assert identifiers_in("xs.size() = n", include_members=False) == ["xs", "n"]


def test_identifiers_ignore_strings_and_number_suffixes():
    assert identifiers_in('s == "hello world" && n > 10L') == ["s", "n"]
    assert strip_string_literals("a = 'x'") == "a =    "


def test_member_names():
    assert member_names_in("p->next->val == q.val") == {"next", "val"}


def test_fingerprint_is_sha256():
    assert fingerprint_text("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


def test_byte_offsets_follow_utf8():
    assert char_to_byte_offsets("aé b") == [0, 1, 3, 4, 5]


def test_indentation_and_reindent():
    text = "if (a) {\n    x := 1\n}"
    assert indentation_at(text, text.index("x")) == "    "
    assert reindent("x := 1\n    y := 2\n  z := 3", 2) == "x := 1\n  y := 2\nz := 3"
    assert reindent("a\n  b", 0) == "a\n  b"

def test_format_duration():
    assert format_duration(1.5) == "1.50s"
    assert format_duration(125) == "2m 5s"
    assert format_duration(3725) == "1h 2m"
