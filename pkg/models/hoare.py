"""
Hoare Triple and Oracle Models

Specification of the property being checked, the annotations it was read
from, the prompt sent to the oracle and the verdict that comes back.
"""

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from config.settings import settings
from models.unified_ast import SourceRange, UnifiedNode
from utils.exceptions import ValidationError


DEFAULT_PRE = "true"


@dataclass(frozen=True)
class HoareSpec:
    """
    Triple {pre} unit {post}

    Attributes:
        pre: Pre-condition text (code or natural language)
        post: Post-condition text, never empty
        post_vars: Explicit slicing criterion, overrides extraction from post
    """
    pre: str
    post: str
    post_vars: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if not self.post or not self.post.strip():
            raise ValidationError('post', self.post, 'post-condition must not be empty')
        if not self.pre or not self.pre.strip():
            object.__setattr__(self, 'pre', DEFAULT_PRE)

    def to_dict(self) -> Dict:
        return {
            "pre": self.pre,
            "post": self.post,
            "post_vars": list(self.post_vars) if self.post_vars is not None else None,
        }


@dataclass(frozen=True)
class AnnotationMarker:
    """
    One PRE or POST comment found in a unit

    Attributes:
        tag: "PRE" or "POST"
        condition: Condition text, from the comment or from the tagged statement
        range: Range of the comment
        statement: Statement the tag trails on the same line (if any)
    """
    tag: str
    condition: Optional[str]
    range: SourceRange
    statement: Optional[UnifiedNode] = None


@dataclass
class Annotations:
    """
    Pre/post material collected from a unit

    Attributes:
        pre: Pre-condition texts in source order
        post: Distinct post-condition texts in source order
        pinned: Statements the slicer must keep (tagged assume / assert)
        markers: Every marker seen
    """
    pre: List[str] = field(default_factory=list)
    post: List[str] = field(default_factory=list)
    pinned: List[UnifiedNode] = field(default_factory=list)
    markers: List[AnnotationMarker] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.markers


@dataclass(frozen=True)
class Prompt:
    """
    Prompt laid out like a Hoare triple

    Attributes:
        preamble: Semantics of assume / assume(0) and the answer format
        pre_section: "Assuming ..." paragraph
        slice_text: Fenced code block holding the rendered slice
        post_section: Post-condition paragraph
        question: Final question
        fingerprint: Fingerprint of the rendered slice the prompt carries
    """
    preamble: str
    pre_section: str
    slice_text: str
    post_section: str
    question: str
    fingerprint: str = ""

    @property
    def sections(self) -> Tuple[str, ...]:
        return (self.preamble, self.pre_section, self.slice_text, self.post_section, self.question)

    def render(self) -> str:
        return "\n\n".join(self.sections) + "\n"

    @property
    def text(self) -> str:
        return self.render()


class Outcome(str, Enum):
    """Per-slice oracle answer"""
    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"


@dataclass
class Verdict:
    """
    Oracle answer for one prompt

    Attributes:
        outcome: PASS, FAIL or ERROR
        raw_response: Text returned by the model (last attempt)
        latency: Seconds spent across attempts
        token_usage: Usage block reported by the endpoint
        error_kind: transport, timeout, unparseable, ambiguous or config for ERROR
        fingerprint: Fingerprint of the slice the prompt carried
        attempts: Number of requests issued
        samples: Per-sample outcomes in best-of-k mode
    """
    outcome: Outcome
    raw_response: str = ""
    latency: float = 0.0
    token_usage: Dict[str, int] = field(default_factory=dict)
    error_kind: Optional[str] = None
    fingerprint: str = ""
    attempts: int = 1
    samples: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "outcome": self.outcome.value,
            "raw_response": self.raw_response,
            "latency": round(self.latency, 4),
            "token_usage": dict(self.token_usage),
            "error_kind": self.error_kind,
            "fingerprint": self.fingerprint,
            "attempts": self.attempts,
            "samples": list(self.samples),
        }


class OracleConfig(BaseModel):
    """Endpoint and sampling options for the language-model oracle"""

    model_config = ConfigDict(frozen=True)

    endpoint: str = Field(default_factory=lambda: settings.LLM_ENDPOINT)
    model: str = Field(default_factory=lambda: settings.LLM_MODEL)
    api_key_env: str = Field(default_factory=lambda: settings.LLM_API_KEY_ENV, min_length=1)
    temperature: float = Field(default_factory=lambda: settings.LLM_TEMPERATURE, ge=0)
    max_retries: int = Field(default_factory=lambda: settings.LLM_MAX_RETRIES, ge=0)
    retry_wait: float = Field(default_factory=lambda: settings.LLM_RETRY_WAIT_SECONDS, ge=0)
    parallelism: int = Field(default_factory=lambda: settings.LLM_PARALLELISM, ge=1)
    best_of: int = Field(default_factory=lambda: settings.LLM_BEST_OF, ge=1)
    timeout: float = Field(default_factory=lambda: settings.LLM_TIMEOUT_SECONDS, gt=0)

    def api_key(self) -> Optional[str]:
        """Credential read from the configured environment variable"""
        return os.getenv(self.api_key_env) or None

    def echo(self) -> Dict:
        """Configuration as echoed in reports (never the credential)"""
        return self.model_dump()
