import json
import threading

import pytest

from models.hoare import Outcome, Prompt
from services.mock_oracle import MockOracle
from utils.exceptions import MockScriptError, StorageException, ValidationError
from tests.support import write_script

FP_PASS = "a" * 64
FP_FAIL = "b" * 64
FP_ERROR = "c" * 64


def prompt(fingerprint):
    return Prompt("p", "pre", "```mini\nskip\n```", "post", "q", fingerprint)


def test_scripted_outcomes():
    oracle = MockOracle({FP_PASS: "PASS", FP_FAIL: "FAIL", FP_ERROR: "ERROR"})

    assert oracle.query(prompt(FP_PASS)).outcome == Outcome.PASS
    failed = oracle.query(prompt(FP_FAIL))
    assert failed.outcome == Outcome.FAIL
    assert failed.raw_response.endswith("VERDICT: FAIL")
    errored = oracle.query(prompt(FP_ERROR))
    assert errored.outcome == Outcome.ERROR
    assert errored.error_kind == "scripted"
    assert oracle.calls == [FP_PASS, FP_FAIL, FP_ERROR]


def test_unknown_fingerprint_is_an_error():
    oracle = MockOracle({FP_PASS: "PASS"})
    with pytest.raises(MockScriptError):
        oracle.query(prompt(FP_FAIL))
    assert oracle.in_flight == 0
    assert oracle.calls == [FP_FAIL]


def test_unknown_outcome_is_rejected():
    with pytest.raises(ValidationError):
        MockOracle({FP_PASS: "MAYBE"})


def test_concurrency_is_tracked():
    oracle = MockOracle({FP_PASS: "PASS"}, delay=0.05)
    threads = [threading.Thread(target=oracle.query, args=(prompt(FP_PASS),)) for _ in range(3)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    assert len(oracle.calls) == 3
    assert 1 <= oracle.max_in_flight <= 3
    assert oracle.in_flight == 0


def test_script_file_round_trip(tmp_path):
    path = write_script(tmp_path / "script.json", {FP_PASS: "PASS"})
    oracle = MockOracle.from_file(path)
    assert oracle.script == {FP_PASS: Outcome.PASS}


def test_script_file_with_bad_key(tmp_path):
    path = write_script(tmp_path / "script.json", {"not-a-fingerprint": "PASS"})
    with pytest.raises(ValidationError):
        MockOracle.from_file(path)


def test_script_file_that_is_not_json(tmp_path):
    path = tmp_path / "script.json"
    path.write_text("{oops", encoding='utf-8')
    with pytest.raises(StorageException):
        MockOracle.from_file(str(path))


def test_empty_script_file_is_valid(tmp_path):
    path = tmp_path / "script.json"
    path.write_text(json.dumps({}), encoding='utf-8')
    assert MockOracle.from_file(str(path)).script == {}
