import json

import pytest

from cli import cli_main
from config.settings import settings
from models.hoare import HoareSpec
from services.frontend import read_unit
from services.orchestrator import AnalysisOrchestrator
from tests.conftest import fixture_path
from tests.support import script_for, write_script

SET_LOOP = fixture_path("set_loop.mini")
SIMPLE = fixture_path("example_simple.mini")
STRAIGHT = fixture_path("straight_line.mini")


def slice_prints(path, post):
    batch = AnalysisOrchestrator().prepare(read_unit(path), HoareSpec("true", post))
    return [job.rendered.fingerprint for job in batch.jobs]


def test_analyze_with_scripted_oracle(tmp_path, capsys):
    script = write_script(tmp_path / "script.json", script_for(slice_prints(SET_LOOP, "xs.size() = n")))
    report_path = tmp_path / "report.json"

    code = cli_main([
        "analyze", SET_LOOP, "--post", "xs.size() = n", "--mock-oracle", script, "--report", str(report_path),
    ])

    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0].endswith("HOLDS")
    assert "Report saved to" in out
    assert json.loads(report_path.read_text(encoding='utf-8'))["verdict"] == "HOLDS"


def test_counterexample_is_still_a_completed_run(tmp_path, capsys):
    script = write_script(tmp_path / "script.json", script_for(slice_prints(SIMPLE, "z > y"), default="FAIL"))
    code = cli_main(["analyze", SIMPLE, "--post", "z > y", "--mock-oracle", script])
    assert code == 0
    assert "COUNTEREXAMPLE" in capsys.readouterr().out


def test_missing_post_condition(tmp_path, capsys):
    script = write_script(tmp_path / "script.json", {})
    assert cli_main(["analyze", STRAIGHT, "--mock-oracle", script]) == 1
    assert "no post-condition" in capsys.readouterr().err


def test_invalid_parallelism_is_a_usage_error():
    assert cli_main(["analyze", STRAIGHT, "--post", "y = 2", "--parallel", "0"]) == 2


def test_unparseable_source(tmp_path):
    source = tmp_path / "broken.mini"
    source.write_text("x := := 2\n", encoding='utf-8')
    script = write_script(tmp_path / "script.json", {})
    assert cli_main(["analyze", str(source), "--post", "x > 0", "--mock-oracle", script]) == 3


def test_missing_endpoint(monkeypatch):
    monkeypatch.setattr(settings, "LLM_ENDPOINT", "")
    assert cli_main(["analyze", STRAIGHT, "--post", "y = 2"]) == 4


def test_slices_command_lists_slices_in_order(tmp_path, capsys):
    out_dir = tmp_path / "slices"
    code = cli_main(["slices", SET_LOOP, "--post", "xs.size() = n", "--emit-slices", str(out_dir)])

    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0].startswith("4 slice(s) from 4 partition(s)")
    assert [line.split(":")[0] for line in lines[1:]] == ["slice_0", "slice_1", "slice_2", "slice_3"]
    assert (out_dir / "slice_0.txt").read_text(encoding='utf-8') == "i := 1\nassume(!(i <= n))\n"


def test_bench_scores_every_entry(tmp_path, capsys):
    entries = [
        ("set_loop", SET_LOOP, "xs.size() = n", "PASS", "HOLDS"),
        ("simple", SIMPLE, "z > y", "FAIL", "COUNTEREXAMPLE"),
        ("straight", STRAIGHT, "y = 2", "PASS", "HOLDS"),
    ]
    manifest = []
    for name, path, post, answer, expected in entries:
        write_script(tmp_path / f"{name}.json", script_for(slice_prints(path, post), default=answer))
        manifest.append({"file": path, "post": post, "expected": expected, "mock_script": f"{name}.json"})
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps(manifest), encoding='utf-8')
    output = tmp_path / "bench.json"

    code = cli_main(["bench", str(manifest_path), "--output", str(output)])

    assert code == 0
    assert capsys.readouterr().out.rstrip().splitlines()[-1] == "Total: 3  Correct: 3  Accuracy: 3/3"
    assert [row["verdict"] for row in json.loads(output.read_text(encoding='utf-8'))] == [
        "HOLDS", "COUNTEREXAMPLE", "HOLDS",
    ]


@pytest.mark.parametrize("argv", [["--help"], ["analyze", "--help"]])
def test_help_exits_cleanly(argv, capsys):
    assert cli_main(argv) == 0
    assert "Usage" in capsys.readouterr().out


def test_invalid_settings_are_rejected(monkeypatch, capsys):
    monkeypatch.setattr(settings, "MAX_PARTITIONS", 0)
    assert cli_main(["analyze", STRAIGHT, "--post", "y = 2"]) == 1
    assert "MAX_PARTITIONS" in capsys.readouterr().err


def test_runner_invocation():
    from click.testing import CliRunner

    from cli import cli

    result = CliRunner().invoke(cli, ["slices", SIMPLE, "--post", "z > y", "--no-context"])
    assert result.exit_code == 0
    assert result.output.startswith("2 slice(s) from 2 partition(s)")
