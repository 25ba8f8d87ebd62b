"""
Analysis Controller - Business Logic Layer

Turns command-line requests into orchestrator calls: loads units, merges
in-file annotations with supplied conditions, builds the oracle, runs the
pipeline, writes reports and exports, and formats results.
"""

import os
from dataclasses import replace
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError as PydanticValidationError

from api.validators import sanitize_condition
from models.analysis_report import AnalysisReport, ReportVerdict
from models.hoare import Annotations, HoareSpec, OracleConfig
from models.unified_ast import SourceUnit
from services.frontend import build_hoare_spec, extract_annotations, read_unit
from services.llm_oracle import LLMOracle
from services.mock_oracle import MockOracle
from services.orchestrator import AnalysisLimits, AnalysisOrchestrator, Oracle, SliceBatch
from services.report_storage import ReportStorage
from utils.exceptions import OracleConfigurationError, SourceParseError
from utils.helpers import format_duration
from utils.logger import get_logger


class AnalysisController:
    """
    Controller for analyze / slices / bench

    Handles:
    - Unit loading and parse checks
    - Hoare triple assembly
    - Oracle construction
    - Report and export writing
    - Bench scoring
    """

    def __init__(self, storage: Optional[ReportStorage] = None):
        self.logger = get_logger(__name__)
        self.storage = storage or ReportStorage()

    # ------------------------------------------------------------------
    # Inputs
    # ------------------------------------------------------------------

    def load_unit(self, path: str, language: Optional[str] = None) -> SourceUnit:
        """
        Read and parse a unit

        Raises:
            SourceReadError: The file cannot be read
            UnknownLanguageError: No adapter for the language
            SourceParseError: Nothing in the file could be parsed
        """
        unit = read_unit(path, language)
        children = unit.root.children
        if unit.errors and (not children or all(child.is_error for child in children)):
            raise SourceParseError(path, "; ".join(unit.errors))
        if unit.errors:
            self.logger.warning(f"{path}: {len(unit.errors)} parse problem(s); affected code is kept opaque")
        return unit

    def build_spec(
        self,
        unit: SourceUnit,
        pre: Optional[str] = None,
        post: Optional[str] = None,
        post_vars: Optional[List[str]] = None,
    ) -> Tuple[HoareSpec, Annotations]:
        """
        Hoare triple from in-file markers and supplied conditions

        Raises:
            NoPostConditionError: No post-condition anywhere
            AnnotationConflictError: Conflicting POST markers
        """
        annotations = extract_annotations(unit)
        spec = build_hoare_spec(
            unit,
            annotations,
            pre=sanitize_condition(pre) if pre else None,
            post=sanitize_condition(post) if post else None,
            post_vars=post_vars or None,
        )
        return spec, annotations

    def build_oracle(
        self,
        endpoint: Optional[str] = None,
        model: Optional[str] = None,
        mock_script: Optional[str] = None,
        parallel: Optional[int] = None,
        best_of: Optional[int] = None,
    ) -> Tuple[Oracle, Dict[str, Any]]:
        """
        Scripted oracle when a mock script is given, otherwise the model client

        Returns:
            (oracle, configuration echo for the report)

        Raises:
            OracleConfigurationError: No endpoint and no script, or invalid settings
        """
        if mock_script:
            self.logger.info(f"Using scripted oracle from {mock_script}")
            return MockOracle.from_file(mock_script), {"mock_script": os.path.abspath(mock_script)}

        overrides = {
            key: value
            for key, value in (("endpoint", endpoint), ("model", model), ("parallelism", parallel), ("best_of", best_of))
            if value is not None
        }
        try:
            config = OracleConfig(**overrides)
        except PydanticValidationError as e:
            fields = ", ".join(".".join(str(p) for p in err["loc"]) for err in e.errors())
            raise OracleConfigurationError(fields or "oracle", str(e))
        return LLMOracle(config), config.echo()

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def _write_exports(self, batch: SliceBatch, emit_cfg: Optional[str], emit_partitions: Optional[str],
                       emit_slices: Optional[str]):
        if emit_cfg:
            self.storage.export_cfg(batch.cfg, emit_cfg)
        if emit_partitions:
            self.storage.export_partitions(batch.partitions, emit_partitions)
        if emit_slices:
            self.storage.export_slices(
                [job.rendered for job in batch.jobs],
                [job.program for job in batch.jobs],
                emit_slices,
                cfg=batch.cfg,
            )

    def analyze_file(
        self,
        path: str,
        oracle: Oracle,
        limits: AnalysisLimits,
        language: Optional[str] = None,
        pre: Optional[str] = None,
        post: Optional[str] = None,
        post_vars: Optional[List[str]] = None,
        config_echo: Optional[Dict[str, Any]] = None,
        report_path: Optional[str] = None,
        emit_cfg: Optional[str] = None,
        emit_partitions: Optional[str] = None,
        emit_slices: Optional[str] = None,
    ) -> AnalysisReport:
        """
        Analyse one file and write the requested outputs

        Returns:
            Finalized report
        """
        unit = self.load_unit(path, language)
        spec, annotations = self.build_spec(unit, pre, post, post_vars)
        report, batch = AnalysisOrchestrator(oracle, limits).analyze(unit, spec, annotations, config_echo)
        self._write_exports(batch, emit_cfg, emit_partitions, emit_slices)
        if report_path:
            self.storage.save_report(report, report_path)
        return report

    def slices_for_file(
        self,
        path: str,
        limits: AnalysisLimits,
        language: Optional[str] = None,
        pre: Optional[str] = None,
        post: Optional[str] = None,
        post_vars: Optional[List[str]] = None,
        emit_cfg: Optional[str] = None,
        emit_partitions: Optional[str] = None,
        emit_slices: Optional[str] = None,
    ) -> SliceBatch:
        """Build and export the slices of one file without querying"""
        unit = self.load_unit(path, language)
        spec, annotations = self.build_spec(unit, pre, post, post_vars)
        batch = AnalysisOrchestrator(None, limits).prepare(unit, spec, annotations)
        self._write_exports(batch, emit_cfg, emit_partitions, emit_slices)
        return batch

    def run_bench(
        self,
        manifest_path: str,
        limits: AnalysisLimits,
        endpoint: Optional[str] = None,
        model: Optional[str] = None,
        mock_script: Optional[str] = None,
        best_of: Optional[int] = None,
        output: Optional[str] = None,
    ) -> Dict[str, Any]:
        """
        Analyse every manifest entry and score verdicts against expectations

        An entry is correct only when its verdict equals the expected one;
        INCONCLUSIVE and failed runs count as incorrect.

        Returns:
            {"rows": [...], "total": n, "correct": k, "accuracy": k / n}
        """
        entries = self.storage.load_manifest(manifest_path)
        shared: Optional[Tuple[Oracle, Dict[str, Any]]] = None
        rows: List[Dict[str, Any]] = []

        for entry in entries:
            if entry.get('mock_script'):
                oracle, echo = self.build_oracle(mock_script=entry['mock_script'])
            else:
                if shared is None:
                    shared = self.build_oracle(endpoint, model, mock_script, limits.parallel, best_of)
                oracle, echo = shared

            row = {"file": entry['file'], "expected": entry['expected'], "verdict": None, "error": None}
            entry_limits = replace(limits, function=entry.get('function', limits.function))
            try:
                report = self.analyze_file(
                    entry['file'], oracle, entry_limits,
                    language=entry.get('language'),
                    pre=entry.get('pre'),
                    post=entry.get('post'),
                    post_vars=entry.get('post_vars'),
                    config_echo=echo,
                )
                totals = report.totals()
                row.update(verdict=report.verdict, queries=totals["queries"], tokens=totals["queried_tokens"])
            except OracleConfigurationError:
                raise
            except Exception as e:
                self.logger.error(f"Bench entry {entry['file']} failed: {e}")
                row["error"] = str(e)
            row["correct"] = row["verdict"] == entry['expected']
            rows.append(row)

        correct = sum(1 for row in rows if row["correct"])
        result = {
            "rows": rows,
            "total": len(rows),
            "correct": correct,
            "accuracy": correct / len(rows) if rows else 0.0,
        }
        if output:
            self.storage.save_bench(rows, output)
        return result

    # ------------------------------------------------------------------
    # Formatting
    # ------------------------------------------------------------------

    @staticmethod
    def format_report(report: AnalysisReport) -> str:
        totals = report.totals()
        latency = sum(record.latency for record in report.queried)
        lines = [
            f"{report.unit}: {report.verdict}",
            f"  slices: {totals['slices']} ({report.vacuous_slices} vacuous, {report.duplicate_slices} duplicate skipped)",
            f"  queries: {totals['queries']}, tokens sent: {totals['queried_tokens']} "
            f"(original region {report.original_tokens}), oracle time {format_duration(latency)}",
        ]
        if report.criterion.get("warning"):
            lines.append(f"  warning: {report.criterion['warning']}")
        if report.verdict == ReportVerdict.COUNTEREXAMPLE.value and report.counterexample is not None:
            lines.append(f"  counterexample (partition {report.counterexample.partition}):")
            lines.extend(f"    {line}" for line in (report.counterexample.text or "").rstrip("\n").split("\n"))
        return "\n".join(lines)

    @staticmethod
    def format_bench(result: Dict[str, Any]) -> str:
        width = max([len(os.path.basename(row["file"])) for row in result["rows"]] + [4])
        lines = [f"{'file':<{width}}  {'expected':<14}  {'verdict':<14}  ok"]
        for row in result["rows"]:
            verdict = row["verdict"] or "ERROR"
            lines.append(
                f"{os.path.basename(row['file']):<{width}}  {row['expected']:<14}  {verdict:<14}  "
                f"{'yes' if row['correct'] else 'no'}"
            )
        lines.append(f"Total: {result['total']}  Correct: {result['correct']}  Accuracy: {result['correct']}/{result['total']}")
        return "\n".join(lines)
