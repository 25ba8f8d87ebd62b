"""
Backward slicing of a truncation

Classic backward liveness over the truncation tree, seeded with the
criterion variables. A statement survives when it may write a live variable
(or is opaque, a return or a jump); a conditional or loop survives when
anything inside it survives. Definitions never kill liveness, so the slice
over-approximates.

Hoisted assumptions are only kept when they constrain something the
verdict depends on: the criterion itself, or a condition or assertion
that survived. That anchor set is grown to a fixpoint.
"""

from dataclasses import replace
from typing import FrozenSet, Iterable, Optional, Set

from models.cfg_graph import Cfg, CfgNode
from models.slice_program import (
    SliceProgram, TBlock, TDead, THoist, TIf, TItem, TLoop, TStmt, TUnreach, iter_items,
)
from models.unified_ast import NodeKind, UnifiedNode, ROLE_ASSERT, ROLE_JUMP
from utils.logger import get_logger, log_function_call

logger = get_logger(__name__)


class BackSlicer:
    """
    One slicing run over a truncation

    Attributes:
        cfg: Graph the truncation was built from
        trunc: Truncation to slice
        criterion: Variables the postcondition reads
        pinned: Statements kept regardless of liveness
    """

    def __init__(self, trunc: SliceProgram, cfg: Cfg, criterion: Iterable[str],
                 pinned: FrozenSet[UnifiedNode] = frozenset()):
        self.trunc = trunc
        self.cfg = cfg
        self.criterion = frozenset(criterion)
        self.pinned = frozenset(pinned) | trunc.pinned
        self.forced: Set[int] = set()
        self._reset()

    def _reset(self) -> None:
        self.kept: Set[int] = set()
        self.kept_conds: Set[int] = set()
        self.kept_hoists: Set[int] = set()
        # bumped on every keep; a change tells an enclosing construct to survive
        self.marks = 0

    def _node(self, node_id: int) -> CfgNode:
        return self.cfg.nodes[node_id]

    @staticmethod
    def _is_assumption(node: CfgNode) -> bool:
        ast = node.ast_ref
        return ast is not None and (ast.kind == NodeKind.ASSUME or ast.role == ROLE_ASSERT)

    # ------------------------------------------------------------------
    # Sweeps (live sets are mutated in place and returned)
    # ------------------------------------------------------------------

    def _keep_stmt(self, item: TStmt, live: Set[str], force: bool = False) -> bool:
        node = self._node(item.node_id)
        if force or item.ast in self.pinned:
            keep = True
        elif self._is_assumption(node):
            keep = bool(node.uses & live) or (not self.criterion and item.ast.kind == NodeKind.ASSUME)
        else:
            keep = (
                node.opaque
                or node.exits
                or item.ast.kind == NodeKind.RETURN
                or item.ast.role == ROLE_JUMP
                or bool(node.defs & live)
            )
        if keep:
            self.kept.add(item.node_id)
            live |= node.uses
            self.marks += 1
        return keep

    def _sweep_item(self, item: Optional[TItem], live: Set[str], force: bool = False) -> Set[str]:
        if item is None or isinstance(item, TDead):
            return live
        if isinstance(item, TUnreach):
            self.marks += 1
            return live
        if isinstance(item, TStmt):
            self._keep_stmt(item, live, force)
            return live
        if isinstance(item, TIf):
            return self._sweep_if(item, live)
        if isinstance(item, TLoop):
            return self._sweep_loop(item, live)
        return self._sweep_hoist(item, live)

    def _sweep_block(self, block: TBlock, live: Set[str]) -> Set[str]:
        for item in reversed(block.items):
            live = self._sweep_item(item, live)
        return live

    def _sweep_if(self, item: TIf, live: Set[str]) -> Set[str]:
        cond = self._node(item.node_id)
        before = self.marks
        then_live = self._sweep_block(item.then, set(live))
        else_live = self._sweep_block(item.else_, set(live)) if item.else_ is not None else set(live)
        keep = (
            self.marks != before
            or item.unreachable_else
            or cond.opaque
            or bool(cond.defs & live)
        )
        live = then_live | else_live
        if keep:
            self.kept_conds.add(item.node_id)
            live |= cond.uses
            self.marks += 1
        return live

    def _sweep_loop(self, item: TLoop, live: Set[str]) -> Set[str]:
        cond = self._node(item.node_id)
        start = self.marks
        cond_kept = False
        head_live = set(live)
        state = None
        while True:
            body_live = set(head_live)
            if item.update is not None:
                body_live = self._sweep_item(item.update, body_live, force=cond_kept)
            body_live = self._sweep_block(item.body, body_live)
            cond_kept = (
                cond_kept
                or self.marks != start
                or cond.opaque
                or bool(cond.defs & head_live)
            )
            head_live = head_live | body_live | (cond.uses if cond_kept else set())
            snapshot = (
                frozenset(head_live), len(self.kept), len(self.kept_conds), len(self.kept_hoists), cond_kept,
            )
            if snapshot == state:
                break
            state = snapshot

        if cond_kept:
            self.kept_conds.add(item.node_id)
            self.marks += 1
        return self._sweep_item(item.init, head_live, force=cond_kept)

    def _sweep_hoist(self, item: THoist, live: Set[str]) -> Set[str]:
        if item.body is not None:
            live = self._sweep_block(item.body, live)
        if item.node_id in self.forced:
            self.kept_hoists.add(item.node_id)
            live |= self._node(item.node_id).uses
            self.marks += 1
        return self._sweep_item(item.init, live)

    # ------------------------------------------------------------------
    # Driver
    # ------------------------------------------------------------------

    def _anchor(self) -> Set[str]:
        anchor = set(self.criterion)
        for node_id in self.kept_conds:
            anchor |= self._node(node_id).uses
        for node_id in self.kept:
            node = self._node(node_id)
            if self._is_assumption(node):
                anchor |= node.uses
        return anchor

    def run(self) -> SliceProgram:
        trunc = self.trunc
        if trunc.vacuous:
            return replace(trunc, sliced=True, criterion_vars=self.criterion)

        hoists = [item for item in iter_items(trunc.tree) if isinstance(item, THoist)]
        if not self.criterion:
            logger.warning("Empty slicing criterion; every assumption is kept")
            self.forced = {hoist.node_id for hoist in hoists}

        rounds = 0
        while True:
            rounds += 1
            self._reset()
            self._sweep_block(trunc.tree, set(self.criterion))
            anchor = self._anchor()
            grown = self.forced | {
                hoist.node_id for hoist in hoists if self._node(hoist.node_id).uses & anchor
            }
            if grown == self.forced:
                break
            self.forced = grown

        synth = tuple(s for s in trunc.synth_assumes if s.node_id in self.kept_hoists)
        kept_nodes = frozenset(self.kept | self.kept_conds)
        logger.debug(
            f"Partition {trunc.partition.discovery_index}: kept {len(kept_nodes)} of "
            f"{len(trunc.kept_nodes)} node(s), {len(synth)} of {len(trunc.synth_assumes)} "
            f"assumption(s) after {rounds} round(s)"
        )
        return replace(
            trunc,
            kept_nodes=kept_nodes,
            synth_assumes=synth,
            criterion_vars=self.criterion,
            sliced=True,
            pinned=self.pinned,
        )


@log_function_call
def back_slice(trunc: SliceProgram, cfg: Cfg, criterion: Iterable[str],
               pinned: FrozenSet[UnifiedNode] = frozenset()) -> SliceProgram:
    """
    Drop the parts of a truncation the criterion does not depend on

    Args:
        trunc: Output of truncate()
        cfg: Graph the truncation was built from
        criterion: Variables read by the postcondition (empty keeps every assumption)
        pinned: Statements that always survive (annotated PRE/POST statements)

    Returns:
        Sliced SliceProgram sharing the truncation tree
    """
    return BackSlicer(trunc, cfg, criterion, pinned).run()
