"""
Analysis Orchestrator

Coordinates one analysis end to end: build the CFG of the selected region,
enumerate partitions, truncate and slice each one, render, drop duplicates,
order by size and ask the oracle until the first refutation.
"""

from collections import deque
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Deque, Dict, List, Optional, Protocol, Tuple

from config.settings import settings
from models.analysis_report import AnalysisReport, SliceRecord, StageName, StageStatus
from models.cfg_graph import Cfg
from models.hoare import Annotations, HoareSpec, Outcome, Prompt, Verdict
from models.partition import Partition
from models.rendered_slice import RenderedSlice
from models.slice_program import SliceProgram
from models.unified_ast import SourceUnit
from services.cfg_builder import build_cfg
from services.criterion import Criterion, criterion_for
from services.frontend import select_function
from services.partitioner import Partitioner
from services.prompt_builder import build_prompt
from services.renderer import SliceRenderer, render_slice
from services.slicer import back_slice
from services.tokenizer import get_tokenizer
from services.truncation import truncate, whole_program
from utils.logger import LogContext, get_logger


class Oracle(Protocol):
    """Anything answering a prompt with a verdict (live model or script)"""

    def query(self, prompt: Prompt) -> Verdict:
        ...


@dataclass
class AnalysisLimits:
    """
    Knobs of one analysis

    Attributes:
        max_partitions: Partition cap
        parallel: Oracle queries in flight at once (look-ahead in size order)
        exhaustive: Query every slice instead of stopping at the first FAIL
        include_context: Prepend out-of-region declarations to each slice
        tokenizer: Tokenizer name (settings.TOKENIZER when None)
        function: Function to analyse (automatic selection when None)
    """
    max_partitions: int = field(default_factory=lambda: settings.MAX_PARTITIONS)
    parallel: int = 1
    exhaustive: bool = False
    include_context: bool = True
    tokenizer: Optional[str] = None
    function: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_partitions": self.max_partitions,
            "parallel": self.parallel,
            "exhaustive": self.exhaustive,
            "include_context": self.include_context,
            "tokenizer": get_tokenizer(self.tokenizer).name,
            "function": self.function,
        }


@dataclass
class SliceJob:
    """Rendered slice waiting for the oracle"""
    program: SliceProgram
    rendered: RenderedSlice

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.rendered.token_count, self.rendered.stmt_count, self.program.partition.discovery_index)


@dataclass
class SliceBatch:
    """
    Everything produced before querying

    Attributes:
        cfg: Graph of the analysed region
        partitions: Partitions in discovery order
        jobs: Distinct, non-vacuous slices in query order
        criterion: Slicing criterion
        original_tokens: Tokens of the analysed region
    """
    cfg: Cfg
    partitions: List[Partition]
    jobs: List[SliceJob]
    criterion: Criterion
    original_tokens: int


class AnalysisOrchestrator:
    """
    Runs the slice-and-ask pipeline over one unit

    Stages:
    1. build_cfg: select the region and lower it
    2. partition: coverage-distinct representative paths
    3. slice: truncate, back-slice and render every partition
    4. order: sort by (tokens, statements, discovery index)
    5. query: ask the oracle in that order
    """

    def __init__(self, oracle: Optional[Oracle] = None, limits: Optional[AnalysisLimits] = None):
        self.logger = get_logger(__name__)
        self.oracle = oracle
        self.limits = limits or AnalysisLimits()

    def _execute_stage(self, report: AnalysisReport, stage: StageName, description: str,
                       func: Callable, *args, **kwargs) -> Any:
        """
        Run one stage with progress tracking

        Raises:
            Exception: Re-raises whatever the stage raised, after recording it
        """
        self.logger.info(f"{description}...")
        report.update_stage(stage.value, StageStatus.IN_PROGRESS)
        try:
            result = func(*args, **kwargs)
            report.update_stage(stage.value, StageStatus.COMPLETED)
            self.logger.debug(f"{description} completed")
            return result
        except Exception as e:
            report.update_stage(stage.value, StageStatus.FAILED, error=str(e))
            self.logger.error(f"{description} failed: {e}")
            raise

    # ------------------------------------------------------------------
    # Stages
    # ------------------------------------------------------------------

    def _build_cfg(self, unit: SourceUnit, annotations: Optional[Annotations]) -> Cfg:
        region = select_function(unit, self.limits.function, annotations)
        return build_cfg(unit, region)

    def _partition(self, cfg: Cfg, report: AnalysisReport) -> List[Partition]:
        partitioner = Partitioner(cfg, self.limits.max_partitions)
        partitions = partitioner.run()
        report.partitions = len(partitions)
        report.partitions_capped = partitioner.capped
        return partitions

    def _slice(self, unit: SourceUnit, cfg: Cfg, partitions: List[Partition], criterion: Criterion,
               annotations: Optional[Annotations], report: AnalysisReport) -> List[SliceJob]:
        pinned = frozenset(annotations.pinned) if annotations is not None else frozenset()
        jobs: List[SliceJob] = []
        seen: Dict[str, int] = {}
        for partition in partitions:
            with LogContext(partition_id=partition.discovery_index):
                program = back_slice(truncate(cfg, partition, unit), cfg, criterion.variables, pinned)
                if program.vacuous:
                    report.vacuous_slices += 1
                    self.logger.info("Partition truncates to an immediate assume(0); skipped as vacuous")
                    continue
                rendered = render_slice(program, unit, self.limits.include_context, self.limits.tokenizer)
                if rendered.fingerprint in seen:
                    report.duplicate_slices += 1
                    self.logger.debug(f"Slice identical to partition {seen[rendered.fingerprint]}'s; dropped")
                    continue
                seen[rendered.fingerprint] = partition.discovery_index
                jobs.append(SliceJob(program, rendered))
        return jobs

    @staticmethod
    def _order(jobs: List[SliceJob]) -> List[SliceJob]:
        return sorted(jobs, key=lambda job: job.sort_key)

    def _record(self, job: SliceJob, original_tokens: int) -> SliceRecord:
        reduction = 0.0
        if original_tokens:
            reduction = 100.0 * (original_tokens - job.rendered.token_count) / original_tokens
        return SliceRecord(
            partition=job.program.partition.discovery_index,
            stmt_count=job.rendered.stmt_count,
            token_count=job.rendered.token_count,
            fingerprint=job.rendered.fingerprint,
            reduction=reduction,
            text=job.rendered.text,
        )

    def _ask(self, job: SliceJob, spec: HoareSpec) -> Verdict:
        # runs on pool threads: LogContext swaps a process-wide factory, so no tagging here
        return self.oracle.query(build_prompt(spec, job.rendered))

    def _query(self, jobs: List[SliceJob], spec: HoareSpec, report: AnalysisReport):
        """
        Ask the oracle in size order with bounded look-ahead

        At most `parallel` queries are in flight; results are consumed in
        size order, so the verdict does not depend on completion order.
        Queries not yet started when a FAIL is consumed are cancelled.
        """
        records = [self._record(job, report.original_tokens) for job in jobs]
        report.per_slice = records
        width = max(1, self.limits.parallel)
        pending: Deque[Tuple[int, Future]] = deque()
        next_index = 0
        stop = False

        with ThreadPoolExecutor(max_workers=width, thread_name_prefix="oracle") as pool:
            while pending or (next_index < len(jobs) and not stop):
                while not stop and next_index < len(jobs) and len(pending) < width:
                    pending.append((next_index, pool.submit(self._ask, jobs[next_index], spec)))
                    next_index += 1
                index, future = pending.popleft()
                if stop and future.cancel():
                    continue
                verdict = future.result()
                record = records[index]
                record.outcome = verdict.outcome.value
                record.latency = verdict.latency
                record.error_kind = verdict.error_kind
                if verdict.outcome == Outcome.FAIL and not self.limits.exhaustive and not stop:
                    self.logger.info(f"Partition {record.partition} refuted; no further slices will be queried")
                    stop = True

    # ------------------------------------------------------------------
    # Entry points
    # ------------------------------------------------------------------

    def prepare(self, unit: SourceUnit, spec: HoareSpec, annotations: Optional[Annotations] = None,
                report: Optional[AnalysisReport] = None) -> SliceBatch:
        """
        Build, render and order every slice of a unit without asking anything

        Args:
            unit: Parsed unit
            spec: Hoare triple (its post drives the criterion)
            annotations: In-file markers (pinned statements, function selection)
            report: Report collecting stage progress (a scratch one when None)

        Returns:
            SliceBatch
        """
        report = report or AnalysisReport(unit=unit.file_id, language=unit.language)
        cfg = self._execute_stage(report, StageName.BUILD_CFG, "Building CFG", self._build_cfg, unit, annotations)

        baseline = SliceRenderer(whole_program(cfg, unit), unit).original_text()
        original_tokens = get_tokenizer(self.limits.tokenizer).count(baseline)
        report.original_tokens = original_tokens

        partitions = self._execute_stage(report, StageName.PARTITION, "Enumerating partitions",
                                         self._partition, cfg, report)
        criterion = criterion_for(spec, unit, cfg)
        report.criterion = criterion.to_dict()
        jobs = self._execute_stage(report, StageName.SLICE, "Truncating and slicing partitions",
                                   self._slice, unit, cfg, partitions, criterion, annotations, report)
        jobs = self._execute_stage(report, StageName.ORDER, "Ordering slices by size", self._order, jobs)
        self.logger.info(
            f"{len(jobs)} slice(s) to query ({report.vacuous_slices} vacuous, "
            f"{report.duplicate_slices} duplicate) from {len(partitions)} partition(s)"
        )
        return SliceBatch(cfg, partitions, jobs, criterion, original_tokens)

    def analyze(self, unit: SourceUnit, spec: HoareSpec, annotations: Optional[Annotations] = None,
                config_echo: Optional[Dict[str, Any]] = None) -> Tuple[AnalysisReport, SliceBatch]:
        """
        Decide a Hoare triple over one unit

        Args:
            unit: Parsed unit
            spec: Hoare triple
            annotations: In-file markers
            config_echo: Oracle settings echoed into the report

        Returns:
            (report, batch): the finalized report and the slices it was built from
        """
        if self.oracle is None:
            raise ValueError("an oracle is required to analyze")
        report = AnalysisReport(
            unit=unit.file_id,
            language=unit.language,
            spec=spec.to_dict(),
            config={"oracle": dict(config_echo or {}), "limits": self.limits.to_dict()},
            schema_version=settings.REPORT_SCHEMA_VERSION,
        )
        self.logger.info("=" * 60)
        self.logger.info(f"Analyzing {unit.file_id}: post-condition {spec.post}")

        batch = self.prepare(unit, spec, annotations, report)
        self._execute_stage(report, StageName.QUERY, "Querying oracle", self._query, batch.jobs, spec, report)
        verdict = report.finalize()

        totals = report.totals()
        self.logger.info(
            f"Verdict for {unit.file_id}: {verdict} after {totals['queries']} "
            f"quer{'y' if totals['queries'] == 1 else 'ies'} ({totals['queried_tokens']} token(s) sent)"
        )
        self.logger.info("=" * 60)
        return report, batch

    def __repr__(self) -> str:
        return f"<AnalysisOrchestrator(max_partitions={self.limits.max_partitions}, parallel={self.limits.parallel})>"


def analyze(unit: SourceUnit, spec: HoareSpec, oracle: Oracle, limits: Optional[AnalysisLimits] = None,
            annotations: Optional[Annotations] = None) -> AnalysisReport:
    """Run the full pipeline and return the report"""
    report, _ = AnalysisOrchestrator(oracle, limits).analyze(unit, spec, annotations)
    return report
