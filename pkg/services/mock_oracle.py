"""
Scripted oracle

Deterministic stand-in for the language model: answers come from a script
mapping slice fingerprints to outcomes. Asking about a slice the script does
not know is an error, never a default answer.
"""

import json
import threading
import time
from typing import Dict, List, Mapping, Union

from models.hoare import Outcome, Prompt, Verdict
from utils.exceptions import MockScriptError, StorageException, ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)


class MockOracle:
    """
    Oracle answering from a fingerprint script

    Attributes:
        script: Fingerprint -> outcome
        calls: Fingerprints in the order they were asked
        in_flight: Queries currently being answered
        max_in_flight: Highest concurrency observed
        delay: Seconds each answer takes (to exercise parallelism)
    """

    def __init__(self, script: Mapping[str, Union[str, Outcome]], delay: float = 0.0):
        self.script: Dict[str, Outcome] = {}
        for fingerprint, outcome in script.items():
            try:
                self.script[fingerprint] = Outcome(outcome)
            except ValueError:
                raise ValidationError('script', outcome, f"unknown outcome for slice {fingerprint}")
        self.delay = delay
        self.calls: List[str] = []
        self.in_flight = 0
        self.max_in_flight = 0
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: str, delay: float = 0.0) -> 'MockOracle':
        """Load a JSON script file ({fingerprint: "PASS" | "FAIL" | "ERROR"})"""
        from api.validators import validate_mock_script

        try:
            with open(path, 'r', encoding='utf-8') as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise StorageException("load_mock_script", str(e), {"path": path})
        is_valid, errors = validate_mock_script(data)
        if not is_valid:
            raise ValidationError('mock_script', path, "; ".join(errors))
        logger.info(f"Loaded mock script with {len(data)} entries from {path}")
        return cls(data, delay)

    def answer(self, fingerprint: str) -> Outcome:
        """Scripted outcome for a fingerprint (recorded in the call log)"""
        with self._lock:
            self.calls.append(fingerprint)
        if fingerprint not in self.script:
            raise MockScriptError(fingerprint)
        return self.script[fingerprint]

    def query(self, prompt: Prompt) -> Verdict:
        with self._lock:
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)
        started = time.monotonic()
        try:
            if self.delay:
                time.sleep(self.delay)
            outcome = self.answer(prompt.fingerprint)
        finally:
            with self._lock:
                self.in_flight -= 1

        raw = f"Scripted answer.\nVERDICT: {outcome.value}" if outcome != Outcome.ERROR else "Scripted failure."
        return Verdict(
            outcome=outcome,
            raw_response=raw,
            latency=time.monotonic() - started,
            error_kind="scripted" if outcome == Outcome.ERROR else None,
            fingerprint=prompt.fingerprint,
        )


def mock_oracle(script: Mapping[str, Union[str, Outcome]], delay: float = 0.0) -> MockOracle:
    """Scripted oracle over a fingerprint -> outcome map"""
    return MockOracle(script, delay)
