"""
Truncated Slice Models

A truncation is a small structured tree mirroring the analysed region:
statements still on the partition, conditionals and loops whose test was
covered, regions replaced by an unreachability assumption, and conditionals
collapsed into an assumption of the taken direction (hoists). The slicer
marks which parts of that tree survive.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

from models.partition import Partition
from models.unified_ast import SourceRange, UnifiedNode


@dataclass(frozen=True)
class TStmt:
    """Covered statement"""
    node_id: int
    ast: UnifiedNode


@dataclass(frozen=True)
class TUnreach:
    """Region no path of the partition reaches, rendered as assume(0)"""
    ast: Optional[UnifiedNode]


@dataclass(frozen=True)
class TDead:
    """Region after a definite exit, dropped without a trace"""
    ast: UnifiedNode


@dataclass(frozen=True)
class TBlock:
    """Statement list of a branch or loop body"""
    items: Tuple['TItem', ...]
    ast: Optional[UnifiedNode] = None

    @property
    def unreachable(self) -> bool:
        """True when the block collapsed to a single unreachability assumption"""
        return len(self.items) == 1 and isinstance(self.items[0], TUnreach)

    def __iter__(self) -> Iterator['TItem']:
        return iter(self.items)


@dataclass(frozen=True)
class TIf:
    """
    Conditional whose test was covered

    Attributes:
        node_id: COND id
        ast: IF node
        then: Then branch
        else_: Else branch (None when the source has none)
        unreachable_else: An else branch holding assume(0) is appended when rendering
    """
    node_id: int
    ast: UnifiedNode
    then: TBlock
    else_: Optional[TBlock] = None
    unreachable_else: bool = False


@dataclass(frozen=True)
class TLoop:
    """Loop whose test was covered"""
    node_id: int
    ast: UnifiedNode
    body: TBlock
    init: Optional[Union[TStmt, TUnreach]] = None
    update: Optional[Union[TStmt, TUnreach]] = None


@dataclass(frozen=True)
class THoist:
    """
    Conditional or loop replaced by an assumption of the direction taken

    Attributes:
        node_id: COND id
        ast: IF / WHILE / FOR node being replaced
        polarity: True for assume(cond), False for assume(!cond)
        body: Branch moved out of the conditional (None when nothing is moved)
        branch_ast: BLOCK node the body came from
        init: Loop initialiser kept ahead of the assumption
    """
    node_id: int
    ast: UnifiedNode
    polarity: bool
    body: Optional[TBlock] = None
    branch_ast: Optional[UnifiedNode] = None
    init: Optional[TStmt] = None


TItem = Union[TStmt, TUnreach, TDead, TIf, TLoop, THoist]


def iter_items(block: TBlock) -> Iterator[TItem]:
    """Pre-order walk over every item of a truncation tree"""
    stack: List[TItem] = list(reversed(block.items))
    while stack:
        item = stack.pop()
        yield item
        children: List[TItem] = []
        if isinstance(item, TIf):
            children = list(item.then.items) + (list(item.else_.items) if item.else_ else [])
        elif isinstance(item, TLoop):
            children = ([item.init] if item.init else []) + list(item.body.items) + ([item.update] if item.update else [])
        elif isinstance(item, THoist):
            children = ([item.init] if item.init else []) + (list(item.body.items) if item.body else [])
        stack.extend(reversed(children))


@dataclass(frozen=True)
class SynthAssume:
    """
    Assumption standing in for a conditional

    Attributes:
        node_id: COND whose untaken direction was truncated
        insertion_point: Range of the replaced conditional or loop
        condition_text: Source text of the condition
        polarity: True when the condition itself is assumed
    """
    node_id: int
    insertion_point: SourceRange
    condition_text: str
    polarity: bool


@dataclass(frozen=True)
class SliceProgram:
    """
    Truncated (and possibly sliced) sub-program of one partition

    Attributes:
        partition: Partition it was built from
        tree: Truncation tree
        kept_nodes: Kept STMT and COND ids (hoisted conditions excluded)
        synth_assumes: Assumptions replacing conditionals, in source order
        unreachable_marks: Ranges rendered as assume(0)
        criterion_vars: Slicing criterion (empty before slicing)
        vacuous: The whole region collapsed to assume(0)
        simplified: Simplification rewrites were applied
        sliced: Back-slicing was applied
        pinned: Statements kept whatever the criterion
    """
    partition: Partition
    tree: TBlock
    kept_nodes: FrozenSet[int]
    synth_assumes: Tuple[SynthAssume, ...] = ()
    unreachable_marks: Tuple[SourceRange, ...] = ()
    criterion_vars: FrozenSet[str] = frozenset()
    vacuous: bool = False
    simplified: bool = True
    sliced: bool = False
    pinned: FrozenSet[UnifiedNode] = field(default_factory=frozenset)

    @property
    def hoisted_ids(self) -> FrozenSet[int]:
        return frozenset(s.node_id for s in self.synth_assumes)

    @property
    def stmt_count(self) -> int:
        """Executable statements of the rendered slice"""
        return len(self.kept_nodes) + len(self.synth_assumes) + len(self.unreachable_marks)

    def to_dict(self) -> Dict:
        return {
            "partition": self.partition.discovery_index,
            "kept_nodes": sorted(self.kept_nodes),
            "synth_assumes": [
                {
                    "node_id": s.node_id,
                    "start": s.insertion_point.start,
                    "end": s.insertion_point.end,
                    "condition": s.condition_text,
                    "polarity": s.polarity,
                }
                for s in self.synth_assumes
            ],
            "unreachable_marks": [[r.start, r.end] for r in self.unreachable_marks],
            "criterion_vars": sorted(self.criterion_vars),
            "vacuous": self.vacuous,
            "stmt_count": self.stmt_count,
        }
