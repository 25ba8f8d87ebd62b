"""
CFG lowering

Walks the unified AST of one region and emits the common patterns:
a diamond for if, a head-tested loop for while and for (with init before the
head and the update closing the loop). Return-like statements go straight to
EXIT; other jumps fall through. Exceptional edges are not modelled.
"""

from typing import Dict, List, Optional, Set, Tuple

import networkx as nx

from models.cfg_graph import Cfg, CfgNode, CfgNodeKind, Loop
from models.unified_ast import (
    NodeKind, SourceUnit, UnifiedNode,
    ROLE_BODY, ROLE_CONDITION, ROLE_ELSE, ROLE_INIT, ROLE_THEN, ROLE_UPDATE,
    is_executable,
)
from utils.logger import get_logger, log_function_call

logger = get_logger(__name__)

# (source node, successor slot) waiting for its target
Pending = List[Tuple[int, int]]


class CfgBuilder:
    """Single-use lowering of one region into a Cfg"""

    def __init__(self, unit: SourceUnit, region: Optional[UnifiedNode] = None):
        self.unit = unit
        self.region = region if region is not None else unit.root
        self.nodes: List[CfgNode] = []
        self.successors: List[List[Optional[int]]] = []
        self.node_of_ast: Dict[UnifiedNode, int] = {}
        self.back_edges: Set[Tuple[int, int]] = set()
        self.loops: List[Loop] = []
        self.exits: List[int] = []

    def _label(self, ast: Optional[UnifiedNode]) -> str:
        if ast is None:
            return ""
        return self.unit.source_text(ast).strip().split('\n', 1)[0][:80]

    def _new(self, kind: CfgNodeKind, ast: Optional[UnifiedNode] = None) -> int:
        node_id = len(self.nodes)
        effects = self.unit.effects_of(ast) if ast is not None else None
        self.nodes.append(CfgNode(
            id=node_id,
            kind=kind,
            ast_ref=ast,
            defs=effects.defs if effects else frozenset(),
            uses=effects.uses if effects else frozenset(),
            calls=effects.calls if effects else frozenset(),
            opaque=effects.opaque if effects else False,
            exits=effects.exits if effects else False,
            label=self._label(ast),
        ))
        slots = 2 if kind == CfgNodeKind.COND else (0 if kind == CfgNodeKind.EXIT else 1)
        self.successors.append([None] * slots)
        if ast is not None:
            self.node_of_ast[ast] = node_id
        return node_id

    def _connect(self, pending: Pending, target: int, back: bool = False) -> None:
        for src, slot in pending:
            self.successors[src][slot] = target
            if back:
                self.back_edges.add((src, target))

    def build(self) -> Cfg:
        entry = self._new(CfgNodeKind.ENTRY)
        body = self.region
        if self.region.kind == NodeKind.FUNCTION_DEF:
            body = self.region.child_with_role(ROLE_BODY) or self.region
        pending = self._lower_items(body.children, [(entry, 0)])

        exit_id = self._new(CfgNodeKind.EXIT)
        self._connect(pending, exit_id)
        for node_id in self.exits:
            self.successors[node_id][0] = exit_id

        successors = tuple(tuple(s for s in slots if s is not None) for slots in self.successors)
        unreachable, dead_ends = self._flags(successors, entry, exit_id)
        cfg = Cfg(
            nodes=tuple(self.nodes),
            successors=successors,
            entry=entry,
            exit=exit_id,
            back_edges=frozenset(self.back_edges),
            loops=tuple(self.loops),
            node_of_ast=dict(self.node_of_ast),
            unreachable=unreachable,
            dead_ends=dead_ends,
            region=self.region,
        )
        if unreachable:
            logger.warning(f"{self.unit.file_id}: {len(unreachable)} CFG node(s) unreachable from entry")
        return cfg

    @staticmethod
    def _flags(successors, entry: int, exit_id: int):
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(successors)))
        graph.add_edges_from((src, dst) for src, targets in enumerate(successors) for dst in targets)
        reachable = nx.descendants(graph, entry) | {entry}
        reaches_exit = nx.ancestors(graph, exit_id) | {exit_id}
        nodes = set(graph.nodes)
        return frozenset(nodes - reachable), frozenset(nodes - reaches_exit)

    # ------------------------------------------------------------------
    # Lowering
    # ------------------------------------------------------------------

    def _lower_items(self, items, pending: Pending) -> Pending:
        for item in items:
            pending = self._lower(item, pending)
        return pending

    def _lower(self, node: UnifiedNode, pending: Pending) -> Pending:
        kind = node.kind
        if kind == NodeKind.BLOCK:
            return self._lower_items(node.children, pending)
        if kind == NodeKind.IF:
            return self._lower_if(node, pending)
        if kind == NodeKind.WHILE:
            return self._lower_loop(node, pending, init=None, update=None)
        if kind == NodeKind.FOR:
            return self._lower_loop(
                node, pending,
                init=node.child_with_role(ROLE_INIT),
                update=node.child_with_role(ROLE_UPDATE),
            )
        if not is_executable(node):
            # comments, plain declarations, nested definitions
            return pending

        node_id = self._new(CfgNodeKind.STMT, node)
        self._connect(pending, node_id)
        if self.nodes[node_id].exits:
            self.exits.append(node_id)
            return []
        return [(node_id, 0)]

    def _lower_if(self, node: UnifiedNode, pending: Pending) -> Pending:
        cond = self._new(CfgNodeKind.COND, node.child_with_role(ROLE_CONDITION))
        self._connect(pending, cond)
        then_block = node.child_with_role(ROLE_THEN)
        else_block = node.child_with_role(ROLE_ELSE)
        out = self._lower_items(then_block.children if then_block else (), [(cond, 0)])
        if else_block is not None:
            out = out + self._lower_items(else_block.children, [(cond, 1)])
        else:
            out = out + [(cond, 1)]
        return out

    def _lower_loop(self, node: UnifiedNode, pending: Pending, init, update) -> Pending:
        if init is not None:
            pending = self._lower(init, pending)
        cond = self._new(CfgNodeKind.COND, node.child_with_role(ROLE_CONDITION))
        self._connect(pending, cond)
        first_body_id = len(self.nodes)
        loop_index = len(self.loops)
        # placeholder keeps outer loops ahead of inner ones
        self.loops.append(Loop(head=cond, body=frozenset(), back_edges=(), owner=node))

        body = node.child_with_role(ROLE_BODY)
        out = self._lower_items(body.children if body is not None else (), [(cond, 0)])
        if update is not None:
            out = self._lower(update, out)
        back = [(src, cond) for src, _ in out]
        self._connect(out, cond, back=True)

        body_ids = frozenset(range(first_body_id, len(self.nodes)))
        self.loops[loop_index] = Loop(head=cond, body=body_ids, back_edges=tuple(back), owner=node)
        return [(cond, 1)]


@log_function_call
def build_cfg(unit: SourceUnit, region: Optional[UnifiedNode] = None) -> Cfg:
    """
    Lower a unit (or one region of it) into a CFG

    Args:
        unit: Parsed unit
        region: FUNCTION_DEF or block to lower (default: the whole unit)

    Returns:
        Cfg with ENTRY 0 and EXIT last
    """
    cfg = CfgBuilder(unit, region).build()
    logger.info(
        f"CFG for {unit.file_id}: {len(cfg.nodes)} node(s), "
        f"{len(cfg.edges())} edge(s), {len(cfg.loops)} loop(s)"
    )
    return cfg
