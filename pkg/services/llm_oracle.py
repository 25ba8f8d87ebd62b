"""
Language-model oracle

Posts prompts to a chat-completions style endpoint and reads the verdict
marker off the last line of the answer. Transport failures and answers
without a clean marker are retried; when retries run out the verdict is
ERROR with the last raw answer kept.
"""

import re
import threading
import time
from collections import Counter
from typing import Dict, List, Optional, Tuple

import requests
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt, wait_fixed

from models.hoare import OracleConfig, Outcome, Prompt, Verdict
from utils.exceptions import OracleConfigurationError
from utils.logger import get_logger

logger = get_logger(__name__)

_VERDICT_LINE = re.compile(r"VERDICT:[ \t]*(PASS|FAIL)")


def parse_verdict(response: str) -> Optional[Outcome]:
    """
    Outcome named by the final non-empty line, or None

    Only a last line consisting of exactly `VERDICT: PASS` or
    `VERDICT: FAIL` counts; the words anywhere else are ignored.
    """
    lines = [line.strip() for line in (response or "").splitlines() if line.strip()]
    if not lines:
        return None
    match = _VERDICT_LINE.fullmatch(lines[-1])
    if match is None:
        return None
    return Outcome(match.group(1))


class UnparseableResponse(Exception):
    """Answer without a verdict line (retried like a transport error)"""

    def __init__(self, text: str):
        super().__init__("response has no final VERDICT line")
        self.text = text


class LLMOracle:
    """
    Chat-completions client answering one prompt at a time

    Thread-safe: the underlying requests.Session is shared, and concurrent
    calls are capped at config.parallelism.
    """

    def __init__(self, config: OracleConfig, session: Optional[requests.Session] = None):
        if not config.endpoint:
            raise OracleConfigurationError("LLM_ENDPOINT", "no oracle endpoint configured (use --endpoint or --mock-oracle)")
        self.config = config
        self.session = session or requests.Session()
        self.logger = get_logger(f"{__name__}.LLMOracle")
        self._slots = threading.BoundedSemaphore(config.parallelism)

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = self.config.api_key()
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, prompt_text: str) -> Tuple[str, Dict[str, int]]:
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt_text}],
            "temperature": self.config.temperature,
        }
        response = self.session.post(
            self.config.endpoint,
            json=payload,
            headers=self._headers(),
            timeout=self.config.timeout,
        )
        response.raise_for_status()
        try:
            data = response.json()
            content = data["choices"][0]["message"]["content"] or ""
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise UnparseableResponse(getattr(response, 'text', '')) from e
        usage = data.get("usage") or {}
        return content, {k: v for k, v in usage.items() if isinstance(v, int)}

    def _sample(self, prompt_text: str) -> Verdict:
        """One answer, retried on transport failures and unparseable text"""
        attempts = 0
        last_text = ""
        usage: Dict[str, int] = {}
        started = time.monotonic()
        retrying = Retrying(
            stop=stop_after_attempt(self.config.max_retries + 1),
            wait=wait_fixed(self.config.retry_wait),
            retry=retry_if_exception_type((requests.RequestException, UnparseableResponse)),
        )
        try:
            for attempt in retrying:
                with attempt:
                    attempts += 1
                    try:
                        last_text, usage = self._post(prompt_text)
                    except UnparseableResponse as e:
                        last_text = e.text
                        raise
                    outcome = parse_verdict(last_text)
                    if outcome is None:
                        self.logger.warning(f"Attempt {attempts}: answer has no final VERDICT line")
                        raise UnparseableResponse(last_text)
                    return Verdict(outcome, last_text, time.monotonic() - started, usage, attempts=attempts)
        except RetryError as e:
            cause = e.last_attempt.exception()
            if isinstance(cause, requests.Timeout):
                kind = "timeout"
            elif isinstance(cause, requests.RequestException):
                kind = "transport"
            else:
                kind = "unparseable"
            self.logger.error(f"Oracle gave up after {attempts} attempt(s): {kind} ({cause})")
            return Verdict(Outcome.ERROR, last_text, time.monotonic() - started, usage, error_kind=kind, attempts=attempts)
        return Verdict(Outcome.ERROR, last_text, time.monotonic() - started, usage, error_kind="unparseable", attempts=attempts)

    def query(self, prompt: Prompt) -> Verdict:
        """
        Verdict for one prompt (majority of best_of samples)

        Args:
            prompt: Prompt to send

        Returns:
            Verdict tagged with the prompt's fingerprint
        """
        text = prompt.render()
        with self._slots:
            samples = [self._sample(text) for _ in range(self.config.best_of)]
        verdict = samples[0] if len(samples) == 1 else _majority(samples)
        verdict.fingerprint = prompt.fingerprint
        self.logger.info(f"Slice {prompt.fingerprint[:12]}: {verdict.outcome.value} in {verdict.latency:.2f}s")
        return verdict


def _majority(samples: List[Verdict]) -> Verdict:
    """Majority of PASS/FAIL among parsed samples; a tie or no answer is ERROR"""
    votes = Counter(s.outcome for s in samples if s.outcome != Outcome.ERROR)
    usage: Dict[str, int] = {}
    for sample in samples:
        for key, value in sample.token_usage.items():
            usage[key] = usage.get(key, 0) + value
    latency = sum(s.latency for s in samples)
    attempts = sum(s.attempts for s in samples)
    names = [s.outcome.value for s in samples]
    raw = samples[-1].raw_response

    if not votes:
        return Verdict(Outcome.ERROR, raw, latency, usage, samples[-1].error_kind, attempts=attempts, samples=names)
    ranked = votes.most_common()
    if len(ranked) > 1 and ranked[0][1] == ranked[1][1]:
        return Verdict(Outcome.ERROR, raw, latency, usage, "ambiguous", attempts=attempts, samples=names)
    winner = ranked[0][0]
    raw = next(s.raw_response for s in samples if s.outcome == winner)
    return Verdict(winner, raw, latency, usage, attempts=attempts, samples=names)
