import pytest

from app import create_app
from models.hoare import HoareSpec
from services.orchestrator import AnalysisOrchestrator
from services.prompt_builder import FAIL_MARKER, PASS_MARKER, build_prompt

SPEC = HoareSpec("true", "z > y")


@pytest.fixture
def prompts(simple_unit):
    batch = AnalysisOrchestrator().prepare(simple_unit, SPEC)
    return [(job.rendered.fingerprint, build_prompt(SPEC, job.rendered).text) for job in batch.jobs]


def ask(client, prompt):
    return client.post("/v1/chat/completions", json={
        "model": "gpt-4o",
        "messages": [{"role": "system", "content": "You are careful."}, {"role": "user", "content": prompt}],
    })


def test_scripted_answers(prompts):
    (first, first_prompt), (second, second_prompt) = prompts
    app = create_app({first: "PASS", second: "FAIL"})
    client = app.test_client()

    passed = ask(client, first_prompt)
    assert passed.status_code == 200
    body = passed.get_json()
    assert body["object"] == "chat.completion"
    assert body["choices"][0]["message"]["content"].endswith(PASS_MARKER)
    assert body["usage"]["total_tokens"] == body["usage"]["prompt_tokens"] + body["usage"]["completion_tokens"]

    failed = ask(client, second_prompt).get_json()
    assert failed["choices"][0]["message"]["content"].endswith(FAIL_MARKER)
    assert app.config['MOCK_ORACLE'].calls == [first, second]


def test_scripted_error_has_no_verdict_line(prompts):
    (fingerprint, prompt), _ = prompts
    client = create_app({fingerprint: "ERROR"}).test_client()
    content = ask(client, prompt).get_json()["choices"][0]["message"]["content"]
    assert content == "Unable to decide."


def test_unscripted_slice_is_not_found(prompts):
    _, (_, prompt) = prompts
    response = ask(create_app({}).test_client(), prompt)
    assert response.status_code == 404
    assert response.get_json()["error"]["type"] == "not_found_error"


def test_messages_are_required():
    client = create_app().test_client()
    assert client.post("/v1/chat/completions", json={"model": "gpt-4o"}).status_code == 400
    assert client.post("/v1/chat/completions", json={
        "messages": [{"role": "system", "content": "hi"}],
    }).status_code == 400


def test_wrong_method():
    response = create_app().test_client().get("/v1/chat/completions")
    assert response.status_code == 405


def test_health_reports_script_size(prompts):
    (fingerprint, _), _ = prompts
    body = create_app({fingerprint: "PASS"}).test_client().get("/health").get_json()
    assert body == {"status": "ok", "scripted_slices": 1, "calls": 0}
