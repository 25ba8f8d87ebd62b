"""
Slice rendering

Turns a SliceProgram back into source text of its own language. Kept code
is copied byte for byte with its whitespace and comments; everything else
is expressed as directives over the original text (delete, replace by an
assumption, insert an unreachable else) and applied through a RangeMap.

Offsets in the unified AST are byte offsets, so the text is handled as
latin-1 (one character per byte) and decoded as UTF-8 at the end.
"""

import textwrap
from typing import Dict, List, Optional, Set, Tuple

from config.settings import settings
from models.rendered_slice import ContextItem, RenderedSlice
from models.slice_program import (
    SliceProgram, TBlock, TDead, THoist, TIf, TItem, TLoop, TStmt, TUnreach, iter_items,
)
from models.unified_ast import NodeKind, SourceUnit, UnifiedNode, ROLE_CONDITION, ROLE_ELSE
from services.frontend import get_adapter
from services.range_map import RangeMap, cleanup
from services.tokenizer import get_tokenizer
from utils.exceptions import RenderError
from utils.helpers import fingerprint_text, identifiers_in, indentation_at, line_end, line_start, reindent
from utils.logger import get_logger, log_function_call

logger = get_logger(__name__)


def _to_bytes_space(text: str) -> str:
    return text.encode('utf-8').decode('latin-1')


def _from_bytes_space(text: str) -> str:
    return text.encode('latin-1').decode('utf-8', errors='replace')


def region_of(slice_program: SliceProgram, unit: SourceUnit) -> UnifiedNode:
    """FUNCTION_DEF whose body the slice covers, or the block itself"""
    body = slice_program.tree.ast
    if body is None:
        return unit.root
    if body.kind == NodeKind.FUNCTION_DEF:
        return body
    parent = unit.parent_map().get(body)
    if parent is not None and parent.kind == NodeKind.FUNCTION_DEF:
        return parent
    return body


class SliceRenderer:
    """
    Single-use renderer of one slice

    Attributes:
        slice: Slice to render
        unit: Unit the slice was built from
        adapter: Language adapter providing the text forms
        map: Directives collected so far
    """

    def __init__(self, slice_program: SliceProgram, unit: SourceUnit):
        self.slice = slice_program
        self.unit = unit
        self.adapter = get_adapter(unit.language)
        self.text = unit.raw_bytes.decode('latin-1')
        self.map = RangeMap()
        self.parents = unit.parent_map()
        self.region = region_of(slice_program, unit)
        self.forced: Dict[int, str] = {s.node_id: s.condition_text for s in slice_program.synth_assumes}

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def _kept(self, node_id: int) -> bool:
        return node_id in self.slice.kept_nodes

    def _survives(self, item: TItem) -> bool:
        if isinstance(item, TStmt):
            return self._kept(item.node_id)
        if isinstance(item, (TIf, TLoop)):
            return self._kept(item.node_id)
        if isinstance(item, THoist):
            if item.node_id in self.forced:
                return True
            if item.init is not None and self._kept(item.init.node_id):
                return True
            return item.body is not None and any(self._survives(inner) for inner in item.body)
        return isinstance(item, TUnreach)

    def _braceless_branch(self, node: Optional[UnifiedNode]) -> bool:
        """Conditional standing alone as an else branch without braces (else-if / elif)"""
        if node is None or node.kind != NodeKind.IF:
            return False
        parent = self.parents.get(node)
        return (
            parent is not None
            and parent.kind == NodeKind.BLOCK
            and parent.role == ROLE_ELSE
            and parent.range == node.range
        )

    def _is_braceless_block(self, block: Optional[UnifiedNode]) -> bool:
        return block is not None and len(block.children) == 1 and self._braceless_branch(block.children[0])

    def _indent(self, node: UnifiedNode) -> str:
        return indentation_at(self.text, node.start)

    # ------------------------------------------------------------------
    # Directives
    # ------------------------------------------------------------------

    def _deletion_range(self, node: UnifiedNode) -> Tuple[int, int]:
        """
        Widen a deletion over a trailing comment and own-line comments directly
        above, without leaving the parent node
        """
        text = self.text
        prefix = self.adapter.comment_prefix
        parent = self.parents.get(node)
        low, high = (parent.start, parent.end) if parent is not None else (0, len(text))
        start, end = node.start, node.end

        rest_end = line_end(text, end)
        if rest_end <= high and text[end:rest_end].lstrip(' \t').startswith(prefix):
            end = rest_end
        while True:
            begin = line_start(text, start)
            if text[begin:start].strip() or begin == 0:
                break
            above = line_start(text, begin - 1)
            line = text[above:begin - 1]
            first = above + len(line) - len(line.lstrip())
            if not line.strip().startswith(prefix) or first < low:
                break
            start = first
        return start, end

    def _drop(self, node: Optional[UnifiedNode], placeholder: bool = False) -> None:
        if node is None:
            return
        if placeholder:
            self.map.replace(node.start, node.end, self.adapter.empty_block_text())
            return
        if self._braceless_branch(node):
            replacement = self.adapter.deleted_branch_text()
            if replacement is not None:
                self.map.replace(node.start, node.end, replacement)
                return
        start, end = self._deletion_range(node)
        self.map.delete(start, end)

    def _unreachable(self, node: UnifiedNode) -> None:
        text = self.adapter.unreachable_text()
        if self._braceless_branch(node):
            text = self.adapter.wrap_branch(text, self._indent(node))
        self.map.replace(node.start, node.end, text)

    # ------------------------------------------------------------------
    # Tree walk
    # ------------------------------------------------------------------

    def render_block(self, block: TBlock, kept_block: bool) -> None:
        if block.unreachable and block.items[0].ast is None:
            children = block.ast.children if block.ast is not None else ()
            if children:
                self.map.replace(children[0].start, children[-1].end, self.adapter.unreachable_text())
            return

        placeholder = None
        if (
            kept_block
            and block.items
            and self.adapter.empty_block_text() is not None
            and not self._is_braceless_block(block.ast)
            and not any(self._survives(item) for item in block.items)
        ):
            placeholder = next((item for item in block.items if item.ast is not None), None)
        for item in block.items:
            self.render_item(item, placeholder=item is placeholder)

    def render_item(self, item: TItem, placeholder: bool = False) -> None:
        if isinstance(item, TStmt):
            if not self._kept(item.node_id):
                self._drop(item.ast, placeholder)
        elif isinstance(item, TDead):
            self._drop(item.ast, placeholder)
        elif isinstance(item, TUnreach):
            if item.ast is not None:
                self._unreachable(item.ast)
        elif isinstance(item, TIf):
            self._render_if(item, placeholder)
        elif isinstance(item, TLoop):
            if self._kept(item.node_id):
                # initialisers and updates stay in the loop header verbatim
                self.render_block(item.body, kept_block=True)
            else:
                self._drop(item.ast, placeholder)
        else:
            self._render_hoist(item, placeholder)

    def _render_if(self, item: TIf, placeholder: bool) -> None:
        if not self._kept(item.node_id):
            self._drop(item.ast, placeholder)
            return
        self.render_block(item.then, kept_block=True)
        if item.else_ is not None:
            self.render_block(item.else_, kept_block=True)
        if item.unreachable_else:
            self.map.insert(item.ast.end, self.adapter.unreachable_else(self._indent(item.ast)))

    def _render_hoist(self, item: THoist, placeholder: bool) -> None:
        indent = self._indent(item.ast)
        parts: List[str] = []
        if item.init is not None and self._kept(item.init.node_id):
            init_text = self.text[item.init.ast.start:item.init.ast.end]
            parts.append(self.adapter.terminate_statement(init_text))
        if item.node_id in self.forced:
            condition = _to_bytes_space(self.forced[item.node_id])
            if not item.polarity:
                condition = self.adapter.negate(condition)
            parts.append(self.adapter.assume_text(condition))
        if item.body is not None and item.branch_ast is not None and item.branch_ast.children:
            self.render_block(item.body, kept_block=False)
            children = item.branch_ast.children
            body = self.map.render(self.text, children[0].start, children[-1].end)
            if cleanup(body).strip():
                remove = len(indentation_at(self.text, children[0].start)) - len(indent)
                parts.append(self.adapter.hoisted_body_text(reindent(body, remove)))

        if not parts:
            self._drop(item.ast, placeholder)
            return
        replacement = ("\n" + indent).join(parts)
        if self._braceless_branch(item.ast):
            replacement = self.adapter.wrap_branch(replacement, indent)
        self.map.replace(item.ast.start, item.ast.end, replacement)

    # ------------------------------------------------------------------
    # Output
    # ------------------------------------------------------------------

    def window(self) -> Tuple[int, int]:
        if self.region.kind == NodeKind.FUNCTION_DEF:
            return line_start(self.text, self.region.start), self.region.end
        return self.region.start, self.region.end

    def _finish(self, raw: str) -> str:
        text = cleanup(raw)
        if self.region.kind == NodeKind.FUNCTION_DEF:
            text = textwrap.dedent(text)
        return _from_bytes_space(text)

    def original_text(self) -> str:
        start, end = self.window()
        return self._finish(self.text[start:end])

    def render(self) -> str:
        """Rendered region (context not included)"""
        self.render_block(self.slice.tree, kept_block=True)
        start, end = self.window()
        rendered = self._finish(self.map.render(self.text, start, end))

        baseline = self.adapter.count_errors(self.original_text().encode('utf-8'))
        errors = self.adapter.count_errors(rendered.encode('utf-8'))
        if errors > baseline:
            raise RenderError(
                f"rendered slice of partition {self.slice.partition.discovery_index} has "
                f"{errors} parse error(s), original region has {baseline}",
                rendered,
            )
        return rendered


def _names_used(slice_program: SliceProgram) -> Tuple[List[UnifiedNode], List[str]]:
    """Kept statements and tests, plus forced assumption texts"""
    nodes: List[UnifiedNode] = []
    conditions: List[str] = [s.condition_text for s in slice_program.synth_assumes]
    for item in iter_items(slice_program.tree):
        if isinstance(item, TStmt) and item.node_id in slice_program.kept_nodes:
            nodes.append(item.ast)
        elif isinstance(item, (TIf, TLoop)) and item.node_id in slice_program.kept_nodes:
            cond = item.ast.child_with_role(ROLE_CONDITION)
            if cond is not None:
                nodes.append(cond)
    return nodes, conditions


@log_function_call
def gather_context(slice_program: SliceProgram, unit: SourceUnit) -> List[ContextItem]:
    """
    Declarations outside the analysed region whose name a kept statement mentions

    Args:
        slice_program: Sliced (or truncated) program
        unit: Unit holding the symbol index

    Returns:
        Context items in source order, each declaration at most once
    """
    region = region_of(slice_program, unit)
    nodes, conditions = _names_used(slice_program)
    names: List[str] = []
    for node in nodes:
        names.extend(identifiers_in(unit.source_text(node), include_members=False))
    for condition in conditions:
        names.extend(identifiers_in(condition, include_members=False))

    cap = settings.CONTEXT_LINE_CAP
    seen: Set[int] = set()
    items: List[ContextItem] = []
    for name in dict.fromkeys(names):
        for declaration in unit.symbol_index.get(name, ()):
            inside = region.range.contains(declaration.range)
            enclosing = declaration.range.contains(region.range)
            if inside or enclosing or id(declaration) in seen:
                continue
            seen.add(id(declaration))
            lines = unit.source_text(declaration).count("\n") + 1
            items.append(ContextItem(name, declaration.range, lines, truncated=lines > cap))
    items.sort(key=lambda item: (item.range.start, item.range.end))
    return items


def _context_text(unit: SourceUnit, item: ContextItem, comment_prefix: str) -> str:
    raw = unit.raw_bytes.decode('latin-1')
    text = _from_bytes_space(raw[line_start(raw, item.range.start):item.range.end])
    text = textwrap.dedent(text)
    if item.truncated:
        lines = text.split("\n")
        kept = lines[:settings.CONTEXT_LINE_CAP]
        kept.append(f"{comment_prefix} ... {len(lines) - len(kept)} more line(s)")
        text = "\n".join(kept)
    return text


@log_function_call
def render_slice(
    slice_program: SliceProgram,
    unit: SourceUnit,
    include_context: bool = True,
    tokenizer: Optional[str] = None,
) -> RenderedSlice:
    """
    Render a slice as coherent source text

    Args:
        slice_program: Output of truncate() or back_slice()
        unit: Unit the slice was built from
        include_context: Prepend name-matched declarations from outside the region
        tokenizer: Tokenizer name (settings.TOKENIZER when omitted)

    Returns:
        RenderedSlice

    Raises:
        RenderError: The rendered text parses worse than the original region
    """
    adapter = get_adapter(unit.language)
    text = SliceRenderer(slice_program, unit).render()

    context: List[ContextItem] = []
    if include_context:
        context = gather_context(slice_program, unit)
        if context:
            blocks = [_context_text(unit, item, adapter.comment_prefix) for item in context]
            text = "\n\n".join(blocks + [text])
            logger.debug(f"Included {len(context)} declaration(s) as context")

    counter = get_tokenizer(tokenizer)
    return RenderedSlice(
        text=text,
        language=unit.language,
        token_count=counter.count(text),
        tokenizer=counter.name,
        stmt_count=slice_program.stmt_count,
        context_items=tuple(context),
        fingerprint=fingerprint_text(text),
        partition_index=slice_program.partition.discovery_index,
        vacuous=slice_program.vacuous,
    )
