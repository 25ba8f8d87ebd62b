"""
Partition Models

A partition is the class of all entry-to-exit paths visiting exactly the
same set of CFG nodes; one representative path stands for the class.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Set, Tuple


@dataclass(frozen=True)
class Partition:
    """
    Representative path plus its coverage

    Attributes:
        repr_path: CFG node ids from entry to exit
        coverage: Set of node ids on repr_path
        discovery_index: Emission order of the partitioner
    """
    repr_path: Tuple[int, ...]
    coverage: FrozenSet[int]
    discovery_index: int

    def __post_init__(self):
        if frozenset(self.repr_path) != self.coverage:
            raise ValueError("partition coverage must equal the node set of its path")

    def to_dict(self) -> Dict:
        return {
            "discovery_index": self.discovery_index,
            "repr_path": list(self.repr_path),
            "coverage": sorted(self.coverage),
        }


@dataclass
class CoverageMap:
    """Seen (node, coverage) pairs; membership is exact set equality"""
    seen: Set[Tuple[int, FrozenSet[int]]] = field(default_factory=set)

    def check_and_insert(self, node: int, coverage: FrozenSet[int]) -> bool:
        """Insert the pair; False when it was already present"""
        key = (node, coverage)
        if key in self.seen:
            return False
        self.seen.add(key)
        return True

    def __contains__(self, key) -> bool:
        return key in self.seen

    def __len__(self) -> int:
        return len(self.seen)
