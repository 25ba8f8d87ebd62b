"""
Analysis Report Model

Tracks the pipeline stages of one analysis and the per-slice oracle
outcomes, and aggregates them into a verdict.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from utils.helpers import get_timestamp


class StageStatus(str, Enum):
    """Pipeline stage status values"""
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"


class StageName(str, Enum):
    """Pipeline stage names"""
    BUILD_CFG = "build_cfg"
    PARTITION = "partition"
    SLICE = "slice"
    ORDER = "order"
    QUERY = "query"


class ReportVerdict(str, Enum):
    """Overall verdict of an analysis"""
    HOLDS = "HOLDS"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    INCONCLUSIVE = "INCONCLUSIVE"


NOT_QUERIED = "NOT_QUERIED"


@dataclass
class PipelineStage:
    """
    One stage of the analysis pipeline

    Attributes:
        stage_name: build_cfg, partition, slice, order or query
        status: pending, in_progress, completed or failed
        started_at: When the stage started
        completed_at: When the stage ended
        error_message: Error message if failed
    """
    stage_name: str
    status: str = StageStatus.PENDING
    started_at: Optional[str] = None
    completed_at: Optional[str] = None
    error_message: Optional[str] = None

    def start(self):
        self.status = StageStatus.IN_PROGRESS
        self.started_at = get_timestamp()

    def complete(self):
        self.status = StageStatus.COMPLETED
        self.completed_at = get_timestamp()

    def fail(self, error_message: str):
        self.status = StageStatus.FAILED
        self.completed_at = get_timestamp()
        self.error_message = error_message

    def to_dict(self) -> Dict:
        return {
            "stage_name": str(getattr(self.stage_name, 'value', self.stage_name)),
            "status": str(getattr(self.status, 'value', self.status)),
            "started_at": self.started_at,
            "completed_at": self.completed_at,
            "error_message": self.error_message,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'PipelineStage':
        return cls(
            stage_name=data['stage_name'],
            status=data.get('status', StageStatus.PENDING),
            started_at=data.get('started_at'),
            completed_at=data.get('completed_at'),
            error_message=data.get('error_message'),
        )


@dataclass
class SliceRecord:
    """
    Oracle outcome of one rendered slice

    Attributes:
        partition: Discovery index of the partition
        stmt_count: Executable statements in the slice
        token_count: Tokens of the rendered slice
        outcome: PASS, FAIL, ERROR or NOT_QUERIED
        latency: Seconds spent by the oracle
        fingerprint: Fingerprint of the rendered slice
        reduction: Percentage of original tokens removed
        error_kind: Oracle error category (ERROR only)
        text: Rendered slice (kept for the counterexample)
    """
    partition: int
    stmt_count: int
    token_count: int
    outcome: str = NOT_QUERIED
    latency: float = 0.0
    fingerprint: str = ""
    reduction: float = 0.0
    error_kind: Optional[str] = None
    text: Optional[str] = None

    def to_dict(self, include_text: bool = False) -> Dict:
        data = {
            "partition": self.partition,
            "stmt_count": self.stmt_count,
            "token_count": self.token_count,
            "outcome": self.outcome,
            "latency": round(self.latency, 4),
            "fingerprint": self.fingerprint,
            "reduction": round(self.reduction, 2),
            "error_kind": self.error_kind,
        }
        if include_text:
            data["text"] = self.text
        return data


@dataclass
class AnalysisReport:
    """
    Result of analysing one unit against one Hoare triple

    Attributes:
        unit: File analysed
        language: Language tag
        spec: Pre/post echo
        verdict: HOLDS, COUNTEREXAMPLE or INCONCLUSIVE
        counterexample: Record of the first FAIL in size order
        per_slice: Records in query order
        stages: Pipeline stages
        config: Echo of oracle and limit settings
        criterion: Slicing criterion and how it was derived
        original_tokens: Tokens of the analysed region
        partitions: Partitions generated
        partitions_capped: True when the partition cap was hit
        vacuous_slices: Slices skipped because the region is unreachable
        duplicate_slices: Slices identical to an earlier one
        schema_version: Report format version
        error_message: Message of the failing stage
        failed_stage: Stage that failed
    """
    unit: str
    language: str
    spec: Dict[str, Any] = field(default_factory=dict)
    verdict: Optional[str] = None
    counterexample: Optional[SliceRecord] = None
    per_slice: List[SliceRecord] = field(default_factory=list)
    stages: List[PipelineStage] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    criterion: Dict[str, Any] = field(default_factory=dict)
    original_tokens: int = 0
    partitions: int = 0
    partitions_capped: bool = False
    vacuous_slices: int = 0
    duplicate_slices: int = 0
    schema_version: str = "1.0"
    created_at: str = field(default_factory=get_timestamp)
    completed_at: Optional[str] = None
    error_message: Optional[str] = None
    failed_stage: Optional[str] = None

    def get_stage(self, stage_name: str) -> Optional[PipelineStage]:
        for stage in self.stages:
            if stage.stage_name == stage_name:
                return stage
        return None

    def update_stage(self, stage_name: str, status: str, error: Optional[str] = None):
        """
        Update status of a stage (created on first use)

        Args:
            stage_name: Stage to update
            status: New status
            error: Error message if failed
        """
        stage = self.get_stage(stage_name)
        if not stage:
            stage = PipelineStage(stage_name=stage_name)
            self.stages.append(stage)

        if status == StageStatus.IN_PROGRESS:
            stage.start()
        elif status == StageStatus.COMPLETED:
            stage.complete()
        elif status == StageStatus.FAILED:
            stage.fail(error or "Unknown error")
            self.failed_stage = str(getattr(stage_name, 'value', stage_name))
            self.error_message = error
            self.completed_at = get_timestamp()

    def get_progress_percentage(self) -> int:
        """Completed stages over all stages of the pipeline"""
        completed = sum(1 for stage in self.stages if stage.status == StageStatus.COMPLETED)
        return int(completed * 100 / len(StageName))

    # ------------------------------------------------------------------
    # Aggregation
    # ------------------------------------------------------------------

    @property
    def queried(self) -> List[SliceRecord]:
        return [record for record in self.per_slice if record.outcome != NOT_QUERIED]

    def finalize(self) -> str:
        """
        Derive the verdict from the per-slice records

        The first FAIL in record order is the counterexample; otherwise any
        ERROR makes the run inconclusive; otherwise the triple holds.
        """
        self.counterexample = next((r for r in self.per_slice if r.outcome == "FAIL"), None)
        if self.counterexample is not None:
            self.verdict = ReportVerdict.COUNTEREXAMPLE.value
        elif any(r.outcome == "ERROR" for r in self.per_slice):
            self.verdict = ReportVerdict.INCONCLUSIVE.value
        else:
            self.verdict = ReportVerdict.HOLDS.value
        self.completed_at = get_timestamp()
        return self.verdict

    def totals(self) -> Dict[str, int]:
        return {
            "slices": len(self.per_slice),
            "queries": len(self.queried),
            "tokens": sum(record.token_count for record in self.per_slice),
            "queried_tokens": sum(record.token_count for record in self.queried),
        }

    def to_dict(self) -> Dict:
        """Dictionary in the report file format"""
        return {
            "schema_version": self.schema_version,
            "unit": self.unit,
            "language": self.language,
            "spec": dict(self.spec),
            "verdict": self.verdict,
            "counterexample": self.counterexample.to_dict(include_text=True) if self.counterexample else None,
            "per_slice": [record.to_dict() for record in self.per_slice],
            "totals": self.totals(),
            "config": dict(self.config),
            "criterion": dict(self.criterion),
            "original_tokens": self.original_tokens,
            "partitions": self.partitions,
            "partitions_capped": self.partitions_capped,
            "vacuous_slices": self.vacuous_slices,
            "duplicate_slices": self.duplicate_slices,
            "stages": [stage.to_dict() for stage in self.stages],
            "progress_percentage": self.get_progress_percentage(),
            "created_at": self.created_at,
            "completed_at": self.completed_at,
            "error_message": self.error_message,
            "failed_stage": self.failed_stage,
        }

    def get_summary(self) -> Dict:
        """One line of the bench table"""
        totals = self.totals()
        return {
            "unit": self.unit,
            "verdict": self.verdict,
            "slices": totals["slices"],
            "queries": totals["queries"],
            "tokens": totals["tokens"],
            "original_tokens": self.original_tokens,
        }

    def __repr__(self) -> str:
        return (
            f"<AnalysisReport(unit='{self.unit}', verdict={self.verdict}, "
            f"slices={len(self.per_slice)}, progress={self.get_progress_percentage()}%)>"
        )
