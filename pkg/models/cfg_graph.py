"""
Control-Flow Graph Models

Nodes are dense integers: ENTRY is 0, statements and conditions follow in
lowering order, EXIT is last. A COND node stores its successors as
(true, false); every other non-exit node has exactly one successor.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from models.unified_ast import UnifiedNode


class CfgNodeKind(str, Enum):
    """CFG node categories"""
    ENTRY = "entry"
    EXIT = "exit"
    STMT = "stmt"
    COND = "cond"
    ASSUME_FALSE = "assume_false"


@dataclass(frozen=True)
class CfgNode:
    """
    One statement or condition

    Attributes:
        id: Dense index
        kind: ENTRY, EXIT, STMT, COND (ASSUME_FALSE only in truncated views)
        ast_ref: Statement node, or CONDITION node for COND
        defs: Identifiers possibly written
        uses: Identifiers possibly read
        calls: Called names
        opaque: Effects not trusted (always kept by the slicer)
        exits: Control leaves the function here (wired to EXIT)
        label: First source line, for exports
    """
    id: int
    kind: CfgNodeKind
    ast_ref: Optional[UnifiedNode] = None
    defs: FrozenSet[str] = frozenset()
    uses: FrozenSet[str] = frozenset()
    calls: FrozenSet[str] = frozenset()
    opaque: bool = False
    exits: bool = False
    label: str = ""


@dataclass(frozen=True)
class Loop:
    """
    One loop of the graph

    Attributes:
        head: COND node testing the loop
        body: Nodes lowered inside the loop (body and update, not the head)
        back_edges: Edges returning to the head
        owner: WHILE / FOR node the loop was lowered from
    """
    head: int
    body: FrozenSet[int]
    back_edges: Tuple[Tuple[int, int], ...]
    owner: Optional[UnifiedNode] = None


@dataclass(frozen=True)
class Cfg:
    """
    Control-flow graph of one analysed region

    Attributes:
        nodes: Nodes indexed by id
        successors: Successor ids per node (COND: true, false)
        entry: ENTRY id (0)
        exit: EXIT id (last)
        back_edges: Loop-closing edges
        loops: Loops in lowering order (outer before inner)
        node_of_ast: Statement / CONDITION node to CFG id
        unreachable: Nodes not reachable from ENTRY (flagged, kept)
        dead_ends: Nodes from which EXIT cannot be reached
        region: Function definition or root block that was lowered
    """
    nodes: Tuple[CfgNode, ...]
    successors: Tuple[Tuple[int, ...], ...]
    entry: int
    exit: int
    back_edges: FrozenSet[Tuple[int, int]] = frozenset()
    loops: Tuple[Loop, ...] = ()
    node_of_ast: Mapping[UnifiedNode, int] = field(default_factory=dict, hash=False)
    unreachable: FrozenSet[int] = frozenset()
    dead_ends: FrozenSet[int] = frozenset()
    region: Optional[UnifiedNode] = None

    def __len__(self) -> int:
        return len(self.nodes)

    def succ(self, node_id: int) -> Tuple[int, ...]:
        return self.successors[node_id]

    def edges(self) -> List[Tuple[int, int]]:
        return [(src, dst) for src, targets in enumerate(self.successors) for dst in targets]

    def predecessors(self) -> Dict[int, List[int]]:
        preds: Dict[int, List[int]] = {node.id: [] for node in self.nodes}
        for src, dst in self.edges():
            preds[dst].append(src)
        return preds

    def ids_of(self, kind: CfgNodeKind) -> List[int]:
        return [node.id for node in self.nodes if node.kind == kind]

    def cond_in_loop_count(self, loop: Loop) -> int:
        return sum(1 for node_id in loop.body if self.nodes[node_id].kind == CfgNodeKind.COND)

    def default_loop_bound(self) -> int:
        """Iteration bound covering every coverage class: CONDs inside the busiest loop, plus one"""
        if not self.loops:
            return 1
        return max(self.cond_in_loop_count(loop) for loop in self.loops) + 1

    def to_networkx(self, coverage: Optional[Iterable[int]] = None) -> nx.DiGraph:
        """
        Directed graph view with string attributes (GraphML friendly)

        With a coverage set, uncovered STMT / COND nodes become ASSUME_FALSE
        nodes without outgoing edges (the truncated view).
        """
        covered = None if coverage is None else frozenset(coverage)
        graph = nx.DiGraph(entry=self.entry, exit=self.exit)
        for node in self.nodes:
            kind = node.kind
            if covered is not None and node.id not in covered and kind in (CfgNodeKind.STMT, CfgNodeKind.COND):
                kind = CfgNodeKind.ASSUME_FALSE
            graph.add_node(
                node.id,
                kind=kind.value,
                label=node.label,
                defs=",".join(sorted(node.defs)),
                uses=",".join(sorted(node.uses)),
            )
        for node in self.nodes:
            if graph.nodes[node.id]['kind'] == CfgNodeKind.ASSUME_FALSE.value:
                continue
            for slot, dst in enumerate(self.successors[node.id]):
                branch = ""
                if node.kind == CfgNodeKind.COND:
                    branch = "true" if slot == 0 else "false"
                graph.add_edge(node.id, dst, branch=branch, back=(node.id, dst) in self.back_edges)
        return graph

    def write_graphml(self, path: str, coverage: Optional[Iterable[int]] = None) -> None:
        nx.write_graphml(self.to_networkx(coverage), path)
