"""
Prompt construction

Lays a rendered slice out like a Hoare triple: what the assumptions mean,
the pre-condition, the code, the post-condition and the yes/no question.
The answer protocol is a final line `VERDICT: PASS` or `VERDICT: FAIL`.
"""

import re
from typing import List

from models.hoare import HoareSpec, Prompt
from models.rendered_slice import RenderedSlice
from services.frontend import get_adapter
from utils.helpers import fingerprint_text

PASS_MARKER = "VERDICT: PASS"
FAIL_MARKER = "VERDICT: FAIL"

_FENCE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


def _preamble(language: str) -> str:
    adapter = get_adapter(language)
    example = adapter.assume_text("c")
    unreachable = adapter.unreachable_text()
    return (
        "You are verifying a property of a code fragment.\n"
        f"A statement `{example}` means that only executions in which c holds continue past it; "
        "executions in which c is false are discarded and do not count.\n"
        f"`{unreachable}` marks code that is never executed.\n"
        "Declarations shown before the fragment are context; analyse the fragment itself.\n"
        "Reason about every execution that reaches the end of the fragment. "
        f"Finish your answer with a line that is exactly `{PASS_MARKER}` if the post-condition "
        f"holds for all of them, or exactly `{FAIL_MARKER}` if it can be violated."
    )


def fence(text: str, tag: str) -> str:
    body = text if text.endswith("\n") else text + "\n"
    return f"```{tag}\n{body}```"


def build_prompt(spec: HoareSpec, rendered: RenderedSlice) -> Prompt:
    """
    Prompt for one slice

    Args:
        spec: Pre- and post-condition
        rendered: Rendered slice

    Returns:
        Prompt (identical inputs give byte-identical prompts)

    Example:
        build_prompt(HoareSpec("true", "z > y"), slice).question
        -> "Question: does the post-condition z > y always hold?"
    """
    adapter = get_adapter(rendered.language)
    return Prompt(
        preamble=_preamble(rendered.language),
        pre_section=f"Assuming {spec.pre}, consider the following {rendered.language} code:",
        slice_text=fence(rendered.text, adapter.fence_tag or rendered.language),
        post_section=f"Post-condition: {spec.post}",
        question=f"Question: does the post-condition {spec.post} always hold?",
        fingerprint=rendered.fingerprint,
    )


def slice_fingerprints(prompt_text: str) -> List[str]:
    """
    Candidate fingerprints of the slice carried by a prompt text

    The fence adds a final newline when the slice has none, so both readings
    of the fenced body are returned.
    """
    match = _FENCE.search(prompt_text)
    if match is None:
        return []
    body = match.group(1)
    candidates = [fingerprint_text(body)]
    if body.endswith("\n"):
        candidates.append(fingerprint_text(body[:-1]))
    return candidates
