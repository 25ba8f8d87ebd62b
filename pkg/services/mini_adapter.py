"""
Grammar adapter for the mini-language

Maps the span-annotated mini-language AST onto unified nodes. Effects are
exact: they come straight from the statement definitions.
"""

from typing import Dict, List, Optional, Tuple

from models.mini_ast import (
    Assume, Assign, IfThenElse, While, Read, Write, Stmt,
    expr_vars, flatten_seq, stmt_effects,
)
from models.unified_ast import (
    NodeKind, StatementEffects, UnifiedNode,
    ROLE_BODY, ROLE_CONDITION, ROLE_ELSE, ROLE_SKIP, ROLE_THEN,
)
from services.grammar_adapter import GrammarAdapter, UnifyResult
from services.mini_parser import Comment, MiniParser, parse_mini
from utils.exceptions import MiniSyntaxError
from utils.helpers import char_to_byte_offsets


class MiniAdapter(GrammarAdapter):
    """Adapter for `.mini` sources"""

    language = "mini"
    extensions = (".mini",)
    fence_tag = "mini"
    comment_prefix = "#"
    tolerant = False
    reentrant = True

    def parse(self, raw: bytes):
        text = raw.decode('utf-8')
        parser = MiniParser(text)
        return parser.parse_program(), parser.comments, text

    def classify_kind(self, raw_node) -> NodeKind:
        if isinstance(raw_node, IfThenElse):
            return NodeKind.IF
        if isinstance(raw_node, While):
            return NodeKind.WHILE
        if isinstance(raw_node, Assign):
            return NodeKind.ASSIGNMENT
        if isinstance(raw_node, (Read, Write)):
            return NodeKind.CALL
        if isinstance(raw_node, Assume):
            return NodeKind.ASSUME
        if isinstance(raw_node, Comment):
            return NodeKind.COMMENT
        return NodeKind.OTHER

    def count_errors(self, raw: bytes) -> int:
        try:
            parse_mini(raw.decode('utf-8'))
        except (MiniSyntaxError, UnicodeDecodeError):
            return 1
        return 0

    def unify(self, tree, raw: bytes, file_id: str) -> UnifyResult:
        prog, comments, text = tree
        return _MiniUnifier(self, raw, text, file_id, comments).run(prog)

    def unify_bytes(self, raw: bytes, file_id: str) -> UnifyResult:
        """Parse and unify, degrading unparseable input to one opaque node"""
        try:
            tree = self.parse(raw)
        except UnicodeDecodeError:
            return self.fallback_root(raw, file_id, "source is not valid UTF-8")
        except MiniSyntaxError as e:
            return self.fallback_root(raw, file_id, e.message)
        return self.unify(tree, raw, file_id)

    # Text forms

    def unreachable_text(self) -> str:
        """Typed spelling of assume(0): conditions are boolean, so the literal is false"""
        return "assume(false)"



class _MiniUnifier:
    """Single-use builder turning one parsed program into unified nodes"""

    def __init__(self, adapter: MiniAdapter, raw: bytes, text: str, file_id: str, comments: List[Comment]):
        self.adapter = adapter
        self.raw = raw
        self.text = text
        self.file_id = file_id
        self.offsets = char_to_byte_offsets(text)
        self.effects: Dict[UnifiedNode, StatementEffects] = {}
        self.comments = [self._comment_node(c) for c in comments]

    def _range(self, start: int, end: int):
        return self.adapter.make_range(self.file_id, self.offsets[start], self.offsets[end])

    def _comment_node(self, comment: Comment) -> UnifiedNode:
        return UnifiedNode(NodeKind.COMMENT, self._range(comment.start, comment.end))

    def run(self, prog: Stmt) -> UnifyResult:
        root_range = self.adapter.make_range(self.file_id, 0, len(self.raw))
        root = self._block(flatten_seq(prog), root_range, None)
        return UnifyResult(root=root, effects=self.effects, comments=list(self.comments))

    def _block(self, stmts: List[Stmt], block_range, role: Optional[str]) -> UnifiedNode:
        children = [self._statement(stmt) for stmt in stmts]
        children = self._with_comments(children, block_range)
        return UnifiedNode(NodeKind.BLOCK, block_range, tuple(children), role=role)

    def _with_comments(self, children: List[UnifiedNode], block_range) -> List[UnifiedNode]:
        # comments sitting between statements of this block (not inside one)
        loose = [
            c for c in self.comments
            if block_range.contains(c.range)
            and not any(child.range.contains(c.range) for child in children)
        ]
        return sorted(children + loose, key=lambda node: node.start)

    def _statement(self, stmt: Stmt) -> UnifiedNode:
        node_range = self._range(stmt.span.start, stmt.span.end)
        kind = self.adapter.classify_kind(stmt)

        if isinstance(stmt, IfThenElse):
            return self._if(stmt, node_range)

        if isinstance(stmt, While):
            cond = self._condition(stmt.cond, stmt.cond_span)
            body = self._block(flatten_seq(stmt.body), self._range(stmt.body_span.start, stmt.body_span.end), ROLE_BODY)
            return UnifiedNode(NodeKind.WHILE, node_range, (cond, body))

        if isinstance(stmt, Assume):
            cond_start, cond_end = self._inner_parens(stmt.span.start, stmt.span.end)
            cond = UnifiedNode(NodeKind.CONDITION, self._range(cond_start, cond_end), role=ROLE_CONDITION)
            self.effects[cond] = StatementEffects(uses=expr_vars(stmt.cond))
            node = UnifiedNode(kind, node_range, (cond,))
        elif isinstance(stmt, Assign):
            node = UnifiedNode(kind, node_range, name_hint=stmt.target)
        elif isinstance(stmt, Read):
            node = UnifiedNode(kind, node_range, name_hint="read")
        elif isinstance(stmt, Write):
            node = UnifiedNode(kind, node_range, name_hint="write")
        else:
            node = UnifiedNode(NodeKind.OTHER, node_range, role=ROLE_SKIP)

        defs, uses = stmt_effects(stmt)
        self.effects[node] = StatementEffects(defs=defs, uses=uses)
        return node

    def _if(self, stmt: IfThenElse, node_range) -> UnifiedNode:
        cond = self._condition(stmt.cond, stmt.cond_span)
        then_range = self._range(stmt.then_span.start, stmt.then_span.end)
        children = [cond, self._block(flatten_seq(stmt.then_branch), then_range, ROLE_THEN)]
        if stmt.else_span is not None:
            else_range = self._range(stmt.else_span.start, stmt.else_span.end)
            nested_if = stmt.else_branch
            if (isinstance(nested_if, IfThenElse) and nested_if.span is not None
                    and nested_if.span.start == stmt.else_span.start):
                # keyword else-if: a block with the nested conditional as its only child
                nested = self._if(stmt.else_branch, else_range)
                children.append(UnifiedNode(NodeKind.BLOCK, else_range, (nested,), role=ROLE_ELSE))
            else:
                children.append(self._block(flatten_seq(stmt.else_branch), else_range, ROLE_ELSE))
        return UnifiedNode(NodeKind.IF, node_range, tuple(children))

    def _condition(self, expr, span) -> UnifiedNode:
        cond = UnifiedNode(NodeKind.CONDITION, self._range(span.start, span.end), role=ROLE_CONDITION)
        self.effects[cond] = StatementEffects(uses=expr_vars(expr))
        return cond

    def _inner_parens(self, start: int, end: int) -> Tuple[int, int]:
        """Character range strictly inside the outer parentheses, trimmed"""
        open_at = self.text.index('(', start) + 1
        close_at = self.text.rindex(')', start, end)
        while open_at < close_at and self.text[open_at].isspace():
            open_at += 1
        while close_at > open_at and self.text[close_at - 1].isspace():
            close_at -= 1
        return open_at, close_at
