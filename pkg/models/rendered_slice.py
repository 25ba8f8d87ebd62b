"""
Rendered Slice Models
"""

from dataclasses import dataclass
from typing import Dict, Tuple

from models.unified_ast import SourceRange


@dataclass(frozen=True)
class ContextItem:
    """
    Declaration copied above the slice because a kept statement names it

    Attributes:
        name: Matched identifier
        range: Declaration range in the unit
        lines: Lines of the declaration
        truncated: Only the first CONTEXT_LINE_CAP lines were copied
    """
    name: str
    range: SourceRange
    lines: int
    truncated: bool = False

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "start": self.range.start,
            "end": self.range.end,
            "lines": self.lines,
            "truncated": self.truncated,
        }


@dataclass(frozen=True)
class RenderedSlice:
    """
    Source text of one slice, ready for prompting

    Attributes:
        text: Context declarations followed by the sliced region
        language: Adapter tag (also the code-fence label)
        token_count: Tokens of text under `tokenizer`
        tokenizer: Name of the tokenizer that produced token_count
        stmt_count: Executable statements (kept nodes, assumptions, assume(0) marks)
        context_items: Declarations included above the region
        fingerprint: SHA-256 of text
        partition_index: Discovery index of the partition
        vacuous: The partition collapsed to assume(0)
    """
    text: str
    language: str
    token_count: int
    tokenizer: str
    stmt_count: int
    context_items: Tuple[ContextItem, ...] = ()
    fingerprint: str = ""
    partition_index: int = -1
    vacuous: bool = False

    def to_dict(self, include_text: bool = False) -> Dict:
        data = {
            "partition": self.partition_index,
            "language": self.language,
            "token_count": self.token_count,
            "tokenizer": self.tokenizer,
            "stmt_count": self.stmt_count,
            "context_items": [item.to_dict() for item in self.context_items],
            "fingerprint": self.fingerprint,
            "vacuous": self.vacuous,
        }
        if include_text:
            data["text"] = self.text
        return data
