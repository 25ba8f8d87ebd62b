"""
Shared fixtures

Source fixtures live in tests/fixtures/. Units are parsed fresh for every
test; CFG node ids are looked up by statement label rather than hardcoded.
"""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from services.cfg_builder import build_cfg  # noqa: E402
from services.frontend import parse_unit  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def read_fixture(name: str) -> str:
    with open(fixture_path(name), 'r', encoding='utf-8') as handle:
        return handle.read()


def pytest_configure(config):
    config.addinivalue_line("markers", "live: needs a real oracle endpoint (LLM_ENDPOINT)")


@pytest.fixture
def mini_unit():
    """Factory parsing mini-language text into a unit"""
    def _make(text: str, file_id: str = "prog.mini"):
        return parse_unit(text, "mini", file_id)
    return _make


@pytest.fixture
def set_loop_source():
    return read_fixture("set_loop.mini")


@pytest.fixture
def set_loop_unit(set_loop_source):
    return parse_unit(set_loop_source, "mini", "set_loop.mini")


@pytest.fixture
def set_loop_cfg(set_loop_unit):
    return build_cfg(set_loop_unit)


@pytest.fixture
def simple_source():
    return read_fixture("example_simple.mini")


@pytest.fixture
def simple_unit(simple_source):
    return parse_unit(simple_source, "mini", "example_simple.mini")


@pytest.fixture
def simple_cfg(simple_unit):
    return build_cfg(simple_unit)
