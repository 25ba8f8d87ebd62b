from unittest.mock import Mock

import pytest
import requests

from models.hoare import OracleConfig, Outcome, Prompt
from services.llm_oracle import LLMOracle, parse_verdict
from utils.exceptions import OracleConfigurationError

PROMPT = Prompt("preamble", "Assuming true", "```mini\nskip\n```", "Post-condition: true", "Question?", "fp-1")


def config(**overrides):
    values = dict(endpoint="http://oracle.test/v1/chat/completions", max_retries=1, retry_wait=0)
    values.update(overrides)
    return OracleConfig(**values)


def completion(content, usage=None):
    response = Mock(spec=requests.Response)
    response.raise_for_status.return_value = None
    response.json.return_value = {
        "choices": [{"message": {"content": content}}],
        "usage": usage or {"prompt_tokens": 10, "completion_tokens": 2},
    }
    response.text = content
    return response


def session_returning(*results):
    session = Mock(spec=requests.Session)
    session.post.side_effect = list(results)
    return session


@pytest.mark.parametrize("text, expected", [
    ("Reasoning...\nVERDICT: PASS", Outcome.PASS),
    ("VERDICT:FAIL\n\n", Outcome.FAIL),
    ("VERDICT: PASS\nmaybe not", None),
    ("I think VERDICT: FAIL", None),
    ("VERDICT: pass", None),
    ("", None),
])
def test_parse_verdict(text, expected):
    assert parse_verdict(text) == expected


def test_missing_endpoint_is_a_configuration_error():
    with pytest.raises(OracleConfigurationError) as exc_info:
        LLMOracle(config(endpoint=""))
    assert exc_info.value.exit_code == 4


def test_pass_answer(monkeypatch):
    monkeypatch.setenv("LLM_API_KEY", "secret")
    session = session_returning(completion("Fine.\nVERDICT: PASS"))
    verdict = LLMOracle(config(), session).query(PROMPT)

    assert verdict.outcome == Outcome.PASS
    assert verdict.fingerprint == "fp-1"
    assert verdict.attempts == 1
    assert verdict.token_usage == {"prompt_tokens": 10, "completion_tokens": 2}

    _, kwargs = session.post.call_args
    assert kwargs["json"]["messages"] == [{"role": "user", "content": PROMPT.render()}]
    assert kwargs["headers"]["Authorization"] == "Bearer secret"
    assert kwargs["timeout"] == config().timeout


def test_unparseable_answers_exhaust_retries():
    session = session_returning(completion("no idea"), completion("still no idea"))
    verdict = LLMOracle(config(), session).query(PROMPT)

    assert verdict.outcome == Outcome.ERROR
    assert verdict.error_kind == "unparseable"
    assert verdict.attempts == 2
    assert verdict.raw_response == "still no idea"


def test_connection_failure_is_a_transport_error():
    session = session_returning(requests.ConnectionError("down"), requests.ConnectionError("down"))
    verdict = LLMOracle(config(), session).query(PROMPT)
    assert verdict.outcome == Outcome.ERROR
    assert verdict.error_kind == "transport"


def test_timeout_is_reported_as_such():
    session = session_returning(requests.Timeout("slow"), requests.Timeout("slow"))
    verdict = LLMOracle(config(), session).query(PROMPT)
    assert verdict.error_kind == "timeout"


def test_second_attempt_recovers():
    session = session_returning(requests.ConnectionError("blip"), completion("VERDICT: FAIL"))
    verdict = LLMOracle(config(), session).query(PROMPT)
    assert verdict.outcome == Outcome.FAIL
    assert verdict.attempts == 2


def test_malformed_body_is_unparseable():
    response = completion("")
    response.json.return_value = {"choices": []}
    verdict = LLMOracle(config(max_retries=0), session_returning(response)).query(PROMPT)
    assert verdict.error_kind == "unparseable"


def test_best_of_takes_the_majority():
    session = session_returning(
        completion("VERDICT: PASS"), completion("VERDICT: FAIL"), completion("VERDICT: PASS"),
    )
    verdict = LLMOracle(config(best_of=3, max_retries=0), session).query(PROMPT)

    assert verdict.outcome == Outcome.PASS
    assert verdict.samples == ["PASS", "FAIL", "PASS"]
    assert verdict.token_usage["prompt_tokens"] == 30


def test_best_of_tie_is_ambiguous():
    session = session_returning(completion("VERDICT: PASS"), completion("VERDICT: FAIL"))
    verdict = LLMOracle(config(best_of=2, max_retries=0), session).query(PROMPT)
    assert verdict.outcome == Outcome.ERROR
    assert verdict.error_kind == "ambiguous"


def test_config_echo_never_contains_the_key(monkeypatch):
    monkeypatch.setenv("LLM_API_KEY", "secret")
    echoed = config().echo()
    assert "secret" not in str(echoed)
    assert echoed["max_retries"] == 1


@pytest.mark.live
def test_live_endpoint_answers():
    from config.settings import settings

    if not settings.LLM_ENDPOINT:
        pytest.skip("LLM_ENDPOINT not set")
    verdict = LLMOracle(OracleConfig()).query(PROMPT)
    assert verdict.outcome in (Outcome.PASS, Outcome.FAIL, Outcome.ERROR)
