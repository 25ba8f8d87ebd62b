"""
Truncation

Replaces everything a partition never visits with an unreachability
assumption, then simplifies:

    assume(0); C                    ->  assume(0)
    C; assume(0)                    ->  assume(0)      (unless C may exit)
    if (b) C else assume(0)         ->  assume(b); C
    if (b) assume(0) else C         ->  assume(!b); C
    while (b) assume(0)             ->  assume(!b)

Statements after a definite exit are dropped.
"""

from typing import List, Optional

from models.cfg_graph import Cfg
from models.partition import Partition
from models.slice_program import (
    SliceProgram, SynthAssume, TBlock, TDead, THoist, TIf, TItem, TLoop, TStmt, TUnreach,
    iter_items,
)
from models.unified_ast import (
    NodeKind, SourceRange, SourceUnit, UnifiedNode,
    ROLE_BODY, ROLE_CONDITION, ROLE_ELSE, ROLE_INIT, ROLE_THEN, ROLE_UPDATE,
    is_executable,
)
from utils.logger import get_logger, log_function_call

logger = get_logger(__name__)


def _item_ast(item: TItem) -> Optional[UnifiedNode]:
    return getattr(item, 'ast', None)


class Truncator:
    """
    Builds the truncation tree of one partition

    Attributes:
        cfg: Graph the partition was taken from
        partition: Partition to truncate
        unit: Source unit (for condition texts; CFG labels are used without it)
        simplify: Apply the rewrite rules (off: assume(0) in place only)
        mark_else: Without simplification, give covered one-armed conditionals
            outside loops an else branch holding assume(0)
    """

    def __init__(self, cfg: Cfg, partition: Partition, unit: Optional[SourceUnit] = None,
                 simplify: bool = True, mark_else: bool = True):
        self.cfg = cfg
        self.partition = partition
        self.unit = unit
        self.simplify = simplify
        self.mark_else = mark_else
        self.coverage = partition.coverage
        self._loop_bodies = {loop.head: loop.body for loop in cfg.loops}

    # ------------------------------------------------------------------
    # Coverage queries
    # ------------------------------------------------------------------

    def _id(self, ast: UnifiedNode) -> int:
        return self.cfg.node_of_ast[ast]

    def _covered(self, ast: UnifiedNode) -> bool:
        node_id = self.cfg.node_of_ast.get(ast)
        return node_id is not None and node_id in self.coverage

    def _covers_any(self, block: Optional[UnifiedNode]) -> bool:
        """Some statement or condition inside the block is covered"""
        if block is None:
            return False
        return any(self._covered(node) for node in block.walk() if node is not block)

    def _exits(self, item: TItem) -> bool:
        return isinstance(item, TStmt) and self.cfg.nodes[item.node_id].exits

    def may_exit(self, item: TItem) -> bool:
        if isinstance(item, TStmt):
            return self._exits(item)
        if isinstance(item, (TUnreach, TDead)):
            return False
        return any(self._exits(inner) for inner in iter_items(TBlock((item,))))

    def definitely_exits(self, item: TItem) -> bool:
        if isinstance(item, TStmt):
            return self._exits(item)
        if isinstance(item, TIf):
            return item.else_ is not None and self._block_exits(item.then) and self._block_exits(item.else_)
        if isinstance(item, THoist):
            return item.body is not None and self._block_exits(item.body)
        return False

    def _block_exits(self, block: TBlock) -> bool:
        return any(self.definitely_exits(item) for item in block.items)

    # ------------------------------------------------------------------
    # Tree construction
    # ------------------------------------------------------------------

    def build(self) -> TBlock:
        region = self.cfg.region
        body = region
        if region is not None and region.kind == NodeKind.FUNCTION_DEF:
            body = region.child_with_role(ROLE_BODY) or region
        children = body.children if body is not None else ()
        return self._finish_block(self._items(children, in_loop=False), body)

    def _finish_block(self, items: List[TItem], ast: Optional[UnifiedNode]) -> TBlock:
        if self.simplify:
            items = self._simplify_items(items)
        return TBlock(tuple(items), ast)

    def _block(self, ast: Optional[UnifiedNode], in_loop: bool) -> TBlock:
        if ast is None:
            return TBlock((), None)
        return self._finish_block(self._items(ast.children, in_loop), ast)

    def _items(self, nodes, in_loop: bool) -> List[TItem]:
        items: List[TItem] = []
        for node in nodes:
            if node.kind == NodeKind.BLOCK:
                items.extend(self._items(node.children, in_loop))
                continue
            item = self._item(node, in_loop)
            if item is not None:
                items.append(item)
        return items

    def _item(self, node: UnifiedNode, in_loop: bool) -> Optional[TItem]:
        if node.kind == NodeKind.IF:
            return self._if(node, in_loop)
        if node.kind in (NodeKind.WHILE, NodeKind.FOR):
            return self._loop(node)
        if not is_executable(node) or node not in self.cfg.node_of_ast:
            return None
        if self._covered(node):
            return TStmt(self._id(node), node)
        return TUnreach(node)

    def _if(self, node: UnifiedNode, in_loop: bool) -> TItem:
        cond = node.child_with_role(ROLE_CONDITION)
        if not self._covered(cond):
            return TUnreach(node)
        cond_id = self._id(cond)
        then_ast = node.child_with_role(ROLE_THEN)
        else_ast = node.child_with_role(ROLE_ELSE)
        then = self._block(then_ast, in_loop)
        else_ = self._block(else_ast, in_loop) if else_ast is not None else None

        if not self.simplify:
            # outside loops a covered then-branch means the false direction was never taken
            append = self.mark_else and else_ is None and not in_loop and self._covers_any(then_ast)
            return TIf(cond_id, node, then, else_, unreachable_else=append)

        if else_ is None:
            if then.unreachable:
                return THoist(cond_id, node, False)
            if not in_loop and self._covers_any(then_ast):
                return THoist(cond_id, node, True, then, then_ast)
            return TIf(cond_id, node, then, None)
        if then.unreachable and else_.unreachable:
            return TUnreach(node)
        if then.unreachable:
            return THoist(cond_id, node, False, else_, else_ast)
        if else_.unreachable:
            return THoist(cond_id, node, True, then, then_ast)
        return TIf(cond_id, node, then, else_)

    def _loop(self, node: UnifiedNode) -> TItem:
        cond = node.child_with_role(ROLE_CONDITION)
        init_ast = node.child_with_role(ROLE_INIT)
        update_ast = node.child_with_role(ROLE_UPDATE)
        init = self._item(init_ast, in_loop=False) if init_ast is not None else None
        if not self._covered(cond):
            return TUnreach(node)
        cond_id = self._id(cond)
        body = self._block(node.child_with_role(ROLE_BODY), in_loop=True)
        update = self._item(update_ast, in_loop=True) if update_ast is not None else None

        if self.simplify:
            loop_nodes = self._loop_bodies.get(cond_id, frozenset())
            entered = bool(loop_nodes & self.coverage)
            if body.unreachable or (loop_nodes and not entered):
                return THoist(cond_id, node, False, init=init if isinstance(init, TStmt) else None)
        return TLoop(cond_id, node, body, init, update)

    # ------------------------------------------------------------------
    # Block-level rewrites
    # ------------------------------------------------------------------

    def _simplify_items(self, items: List[TItem]) -> List[TItem]:
        out: List[TItem] = []
        exited = False
        for item in items:
            if exited:
                if not isinstance(item, TDead):
                    item = TDead(_item_ast(item))
                out.append(item)
                continue
            out.append(item)
            exited = self.definitely_exits(item)

        for index, item in enumerate(out):
            if not isinstance(item, TUnreach):
                continue
            if any(self.may_exit(previous) for previous in out[:index]):
                tail = [rest if isinstance(rest, TDead) else TDead(_item_ast(rest)) for rest in out[index + 1:]]
                return out[:index + 1] + tail
            return [TUnreach(None)]
        return out

    # ------------------------------------------------------------------
    # Result
    # ------------------------------------------------------------------

    def condition_text(self, node_id: int) -> str:
        node = self.cfg.nodes[node_id]
        if self.unit is not None and node.ast_ref is not None:
            return self.unit.source_text(node.ast_ref).strip()
        return node.label

    def run(self) -> SliceProgram:
        tree = self.build()
        vacuous = self.simplify and tree.unreachable
        kept = set()
        synth: List[SynthAssume] = []
        marks: List[SourceRange] = []
        if not vacuous:
            for item in iter_items(tree):
                if isinstance(item, TStmt):
                    kept.add(item.node_id)
                elif isinstance(item, (TIf, TLoop)):
                    kept.add(item.node_id)
                    if isinstance(item, TIf) and item.unreachable_else:
                        end = item.ast.end
                        marks.append(SourceRange(item.ast.range.file_id, end, end))
                elif isinstance(item, THoist):
                    synth.append(SynthAssume(
                        item.node_id, item.ast.range, self.condition_text(item.node_id), item.polarity,
                    ))
                elif isinstance(item, TUnreach) and item.ast is not None:
                    marks.append(item.ast.range)
        else:
            logger.info(f"Partition {self.partition.discovery_index} truncates to an immediate assume(0)")

        return SliceProgram(
            partition=self.partition,
            tree=tree,
            kept_nodes=frozenset(kept),
            synth_assumes=tuple(sorted(synth, key=lambda s: s.insertion_point.start)),
            unreachable_marks=tuple(sorted(marks, key=lambda r: (r.start, r.end))),
            vacuous=vacuous,
            simplified=self.simplify,
        )


@log_function_call
def truncate(cfg: Cfg, part: Partition, unit: Optional[SourceUnit] = None, simplify: bool = True) -> SliceProgram:
    """
    Truncated sub-program of one partition

    Args:
        cfg: Graph the partition came from
        part: Partition to keep
        unit: Source unit providing condition texts
        simplify: Apply the rewrite rules (default) or only mark unreachable regions

    Returns:
        SliceProgram holding every covered statement (not yet sliced)
    """
    return Truncator(cfg, part, unit, simplify).run()


def whole_program(cfg: Cfg, unit: Optional[SourceUnit] = None) -> SliceProgram:
    """Slice keeping every statement of the region (renders as the original text)"""
    every = tuple(range(len(cfg.nodes)))
    part = Partition(every, frozenset(every), -1)
    return Truncator(cfg, part, unit, simplify=False, mark_else=False).run()
