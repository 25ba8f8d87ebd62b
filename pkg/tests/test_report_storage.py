import json
import os

import networkx as nx
import pytest

from models.analysis_report import AnalysisReport, SliceRecord
from models.hoare import HoareSpec
from services.mock_oracle import MockOracle
from services.orchestrator import AnalysisOrchestrator
from services.report_storage import ReportStorage
from utils.exceptions import StorageException, ValidationError
from tests.support import script_for


@pytest.fixture
def storage():
    return ReportStorage()


def finished_report(unit):
    spec = HoareSpec("true", "z > y")
    batch = AnalysisOrchestrator().prepare(unit, spec)
    oracle = MockOracle(script_for(job.rendered.fingerprint for job in batch.jobs))
    return AnalysisOrchestrator(oracle).analyze(unit, spec)


def test_report_round_trip(storage, simple_unit, tmp_path):
    report, _ = finished_report(simple_unit)
    path = str(tmp_path / "out" / "report.json")

    written = storage.save_report(report, path)
    loaded = storage.load_report(path)

    assert loaded == json.loads(json.dumps(written))
    assert loaded["verdict"] == "HOLDS"
    assert loaded["schema_version"] == "1.0"


def test_invalid_report_is_not_written(storage, tmp_path):
    report = AnalysisReport(unit="prog.mini", language="mini")
    report.per_slice = [SliceRecord(partition=0, stmt_count=1, token_count=1, fingerprint="nope")]
    report.finalize()
    path = tmp_path / "report.json"

    with pytest.raises(ValidationError):
        storage.save_report(report, str(path))
    assert not path.exists()


def test_missing_report_file(storage, tmp_path):
    with pytest.raises(StorageException):
        storage.load_report(str(tmp_path / "absent.json"))


def test_manifest_paths_are_resolved(storage, tmp_path):
    manifest = tmp_path / "bench" / "manifest.json"
    manifest.parent.mkdir()
    manifest.write_text(json.dumps([
        {"file": "a.mini", "post": "x > 0", "expected": "HOLDS", "mock_script": "a.json"},
        {"file": "/abs/b.mini", "expected": "COUNTEREXAMPLE"},
    ]), encoding='utf-8')

    first, second = storage.load_manifest(str(manifest))
    assert first["file"] == os.path.join(str(manifest.parent), "a.mini")
    assert first["mock_script"] == os.path.join(str(manifest.parent), "a.json")
    assert second["file"] == "/abs/b.mini"


def test_invalid_manifest(storage, tmp_path):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps([{"file": "a.mini"}]), encoding='utf-8')
    with pytest.raises(ValidationError):
        storage.load_manifest(str(manifest))


def test_exports(storage, set_loop_unit, tmp_path):
    batch = AnalysisOrchestrator().prepare(set_loop_unit, HoareSpec("true", "xs.size() = n"))

    storage.export_cfg(batch.cfg, str(tmp_path / "cfg.graphml"))
    assert nx.read_graphml(str(tmp_path / "cfg.graphml")).number_of_nodes() == len(batch.cfg)

    storage.export_partitions(batch.partitions, str(tmp_path / "partitions.json"))
    coverages = json.loads((tmp_path / "partitions.json").read_text(encoding='utf-8'))
    assert coverages == [sorted(p.coverage) for p in batch.partitions]

    written = storage.export_slices(
        [job.rendered for job in batch.jobs], [job.program for job in batch.jobs],
        str(tmp_path / "slices"), cfg=batch.cfg,
    )
    assert len(written) == len(batch.jobs)
    assert open(written[0], encoding='utf-8').read() == batch.jobs[0].rendered.text
    meta = json.loads((tmp_path / "slices" / "slice_0.json").read_text(encoding='utf-8'))
    assert meta["fingerprint"] == batch.jobs[0].rendered.fingerprint
    assert meta["slice"]["stmt_count"] == batch.jobs[0].rendered.stmt_count
    assert (tmp_path / "slices" / "slice_0.graphml").exists()
