"""
Shared machinery for tree-sitter based adapters

Holds one parser per adapter instance behind a lock, counts error nodes for
the renderer's reparse check and offers the bookkeeping every language
mapping needs (ranges, effects table, comment collection).
"""

from dataclasses import dataclass, field
from threading import Lock
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from models.unified_ast import NodeKind, SourceRange, StatementEffects, UnifiedNode
from services.grammar_adapter import GrammarAdapter, UnifyResult


@dataclass(frozen=True)
class ParsedSource:
    """Native tree plus the offsets of pseudo-keywords rewritten before parsing"""
    tree: Any
    rewritten: FrozenSet[int] = frozenset()


@dataclass
class UnifyContext:
    """Per-call state while mapping one tree"""
    raw: bytes
    file_id: str
    rewritten: FrozenSet[int] = frozenset()
    effects: Dict[UnifiedNode, StatementEffects] = field(default_factory=dict)
    errors: List[str] = field(default_factory=list)

    def range_of(self, node) -> SourceRange:
        return SourceRange(self.file_id, node.start_byte, node.end_byte)

    def span(self, start: int, end: int) -> SourceRange:
        return SourceRange(self.file_id, start, end)

    def text(self, node) -> str:
        return self.raw[node.start_byte:node.end_byte].decode('utf-8', errors='replace')

    def record(self, node: UnifiedNode, effects: StatementEffects) -> UnifiedNode:
        self.effects[node] = effects
        return node


def iter_tree(node) -> Iterable[Any]:
    """Pre-order walk over a native tree"""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(current.children))


def first_named(node) -> Optional[Any]:
    """First named child that is not a comment"""
    for child in node.named_children:
        if child.type != 'comment':
            return child
    return None


class TreeSitterAdapter(GrammarAdapter):
    """
    Base class for adapters backed by a tree-sitter grammar

    Subclasses provide `language_object()` and the node mapping through
    `unify_root(tree_root, ctx)`.
    """

    # Native node types mapped directly to unified kinds
    KIND_MAP: Dict[str, NodeKind] = {}

    def __init__(self):
        super().__init__()
        from tree_sitter import Parser

        self._parser = Parser(self.language_object())
        self._lock = Lock()

    @classmethod
    def language_object(cls):
        raise NotImplementedError

    def prepare(self, raw: bytes) -> Tuple[bytes, FrozenSet[int]]:
        """Rewrite pseudo-statements before parsing (same length, same offsets)"""
        return raw, frozenset()

    def parse(self, raw: bytes) -> ParsedSource:
        prepared, rewritten = self.prepare(raw)
        with self._lock:
            tree = self._parser.parse(prepared)
        return ParsedSource(tree, rewritten)

    def count_errors(self, raw: bytes) -> int:
        parsed = self.parse(raw)
        return sum(
            1 for node in iter_tree(parsed.tree.root_node)
            if node.type == 'ERROR' or node.is_missing
        )

    def classify_kind(self, raw_node) -> NodeKind:
        if raw_node.type == 'ERROR':
            return NodeKind.OTHER
        return self.KIND_MAP.get(raw_node.type, NodeKind.OTHER)

    def unify(self, tree: ParsedSource, raw: bytes, file_id: str) -> UnifyResult:
        ctx = UnifyContext(raw=raw, file_id=file_id, rewritten=tree.rewritten)
        root_node = tree.tree.root_node
        children = self.unify_items(root_node.children, ctx, top_level=True)
        root = UnifiedNode(NodeKind.BLOCK, ctx.span(0, len(raw)), tuple(children))

        comments = [
            UnifiedNode(NodeKind.COMMENT, ctx.range_of(node))
            for node in iter_tree(root_node) if node.type == 'comment'
        ]
        if root_node.has_error:
            count = sum(1 for node in iter_tree(root_node) if node.type == 'ERROR' or node.is_missing)
            ctx.errors.append(f"{count} error region(s) recovered as opaque nodes")
            self.logger.debug(f"{file_id}: {count} tree-sitter error region(s)")
        return UnifyResult(root=root, effects=ctx.effects, comments=comments, errors=ctx.errors)

    def unify_items(self, nodes, ctx: UnifyContext, top_level: bool = False) -> List[UnifiedNode]:
        items: List[UnifiedNode] = []
        for node in nodes:
            if not node.is_named and node.type != 'ERROR':
                continue
            item = self.unify_statement(node, ctx, top_level)
            if item is not None:
                items.append(item)
        return items

    def unify_statement(self, node, ctx: UnifyContext, top_level: bool) -> Optional[UnifiedNode]:
        raise NotImplementedError

    # ------------------------------------------------------------------
    # Helpers for subclasses
    # ------------------------------------------------------------------

    def comment(self, node, ctx: UnifyContext) -> UnifiedNode:
        return UnifiedNode(NodeKind.COMMENT, ctx.range_of(node))

    def opaque(self, node, ctx: UnifyContext, role: Optional[str], uses=frozenset(), exits=False) -> UnifiedNode:
        """Statement whose effects are not trusted"""
        unified = UnifiedNode(NodeKind.OTHER, ctx.range_of(node), role=role, is_error=node.type == 'ERROR')
        return ctx.record(unified, StatementEffects(defs=frozenset(uses), uses=frozenset(uses), opaque=True, exits=exits))
