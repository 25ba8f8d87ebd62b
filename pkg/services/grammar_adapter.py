"""
Grammar adapter contract

An adapter turns raw source bytes of one language into the unified AST and
knows the handful of text forms the renderer needs to write new code in that
language (assumptions, negations, unreachable markers).
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

from models.unified_ast import NodeKind, SourceRange, StatementEffects, UnifiedNode
from utils.logger import get_logger


@dataclass
class UnifyResult:
    """Output of GrammarAdapter.unify"""
    root: UnifiedNode
    effects: Dict[UnifiedNode, StatementEffects] = field(default_factory=dict)
    comments: List[UnifiedNode] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)


class GrammarAdapter(ABC):
    """
    Base class for language adapters

    Class attributes:
        language: Registry tag
        extensions: File extensions mapped to this adapter
        fence_tag: Code-fence label used in prompts
        comment_prefix: Line-comment marker
        tolerant: False when parse errors must stop the analysis
        reentrant: True when one instance may parse concurrently
    """

    language: str = ""
    extensions: Tuple[str, ...] = ()
    fence_tag: str = ""
    comment_prefix: str = "#"
    tolerant: bool = True
    reentrant: bool = False

    def __init__(self):
        self.logger = get_logger(f"{__name__}.{self.language or 'adapter'}")

    # ------------------------------------------------------------------
    # Parsing contract
    # ------------------------------------------------------------------

    @abstractmethod
    def parse(self, raw: bytes) -> Any:
        """Parse raw bytes into the adapter's native tree"""

    @abstractmethod
    def unify(self, tree: Any, raw: bytes, file_id: str) -> UnifyResult:
        """Map a native tree onto unified nodes"""

    @abstractmethod
    def classify_kind(self, raw_node: Any) -> NodeKind:
        """Unified kind of one native node"""

    @abstractmethod
    def count_errors(self, raw: bytes) -> int:
        """Number of error regions when parsing raw bytes"""

    def unify_bytes(self, raw: bytes, file_id: str) -> UnifyResult:
        """Parse and unify in one step"""
        return self.unify(self.parse(raw), raw, file_id)

    # ------------------------------------------------------------------
    # Text forms used by the renderer and the prompt builder
    # ------------------------------------------------------------------

    def assume_text(self, condition: str) -> str:
        return f"assume({condition})"

    def negate(self, condition: str) -> str:
        return f"!({condition})"

    def unreachable_text(self) -> str:
        return "assume(0)"

    def conjoin(self, conditions: Iterable[str]) -> str:
        parts = [c for c in conditions if c]
        if len(parts) == 1:
            return parts[0]
        return " && ".join(f"({c})" for c in parts)

    def empty_block_text(self) -> Optional[str]:
        """Statement placed in a kept block whose statements were all dropped"""
        return None

    def deleted_branch_text(self) -> Optional[str]:
        """Replacement for a dropped else-if that has no braces of its own"""
        return "{ }"

    def wrap_branch(self, text: str, indent: str) -> str:
        """Wrap replacement text that stands in for a braceless branch"""
        inner = text.replace("\n", "\n  ")
        return "{\n" + indent + "  " + inner + "\n" + indent + "}"

    def terminate_statement(self, text: str) -> str:
        """Standalone form of a loop initialiser moved out of its header"""
        return text

    def hoisted_body_text(self, text: str) -> str:
        """Adjust a branch body moved out of its conditional"""
        return text

    def unreachable_else(self, indent: str) -> str:
        """Else branch appended to a conditional whose false side is unreachable"""
        return f" else {{ {self.unreachable_text()} }}"

    # ------------------------------------------------------------------
    # Shared helpers
    # ------------------------------------------------------------------

    @staticmethod
    def make_range(file_id: str, start: int, end: int) -> SourceRange:
        return SourceRange(file_id, start, end)

    def fallback_root(self, raw: bytes, file_id: str, reason: str) -> UnifyResult:
        """Root block holding one opaque node over the whole file"""
        whole = SourceRange(file_id, 0, len(raw))
        children: Tuple[UnifiedNode, ...] = ()
        effects: Dict[UnifiedNode, StatementEffects] = {}
        if raw:
            other = UnifiedNode(NodeKind.OTHER, whole, is_error=True)
            effects[other] = StatementEffects(opaque=True)
            children = (other,)
        root = UnifiedNode(NodeKind.BLOCK, whole, children)
        self.logger.warning(f"Falling back to an opaque node for {file_id}: {reason}")
        return UnifyResult(root=root, effects=effects, errors=[reason])

    def __repr__(self) -> str:
        return f"<{type(self).__name__}(language={self.language})>"
