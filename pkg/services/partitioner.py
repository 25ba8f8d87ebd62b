"""
Path partitioning

Depth-first search over (node, coverage-so-far) states. A state already
seen is pruned, which bounds the search by |nodes| x 2^|nodes| and keeps
emitted coverage sets pairwise distinct. The true branch is explored first.

Also home of the brute-force coverage enumerator used to cross-check the
partitioner on small graphs.
"""

from typing import FrozenSet, List, Optional, Set, Tuple

from models.cfg_graph import Cfg
from models.partition import CoverageMap, Partition
from utils.exceptions import CoverageExplosionError
from utils.logger import get_logger, log_function_call

logger = get_logger(__name__)

DEFAULT_WALK_BUDGET = 2_000_000


class Partitioner:
    """
    Coverage-pruned DFS over one CFG

    Attributes:
        cfg: Graph to partition
        max_partitions: Emission cap (None for no cap)
        visits: States popped by the last run
        capped: True when the last run stopped at the cap
    """

    def __init__(self, cfg: Cfg, max_partitions: Optional[int] = None):
        self.cfg = cfg
        self.max_partitions = max_partitions
        self.visits = 0
        self.capped = False

    def run(self) -> List[Partition]:
        cfg = self.cfg
        self.visits = 0
        self.capped = False
        if cfg.exit in cfg.unreachable:
            logger.warning("EXIT is unreachable from ENTRY; no partitions")
            return []

        covmap = CoverageMap()
        start_cov = frozenset({cfg.entry})
        covmap.check_and_insert(cfg.entry, start_cov)
        stack: List[Tuple[int, Tuple[int, ...], FrozenSet[int]]] = [(cfg.entry, (cfg.entry,), start_cov)]
        partitions: List[Partition] = []

        while stack:
            node, path, cov = stack.pop()
            self.visits += 1
            if node == cfg.exit:
                partitions.append(Partition(path, cov, len(partitions)))
                if self.max_partitions is not None and len(partitions) >= self.max_partitions:
                    if stack:
                        self.capped = True
                        logger.warning(f"Partition cap of {self.max_partitions} reached; remaining paths not explored")
                    break
                continue
            for successor in reversed(cfg.succ(node)):
                extended = cov | {successor}
                if covmap.check_and_insert(successor, extended):
                    stack.append((successor, path + (successor,), extended))

        logger.info(f"{len(partitions)} partition(s) after {self.visits} visit(s)")
        return partitions


@log_function_call
def gen_partitions(cfg: Cfg, max_partitions: Optional[int] = None) -> List[Partition]:
    """
    Coverage-distinct representative paths of a CFG

    Args:
        cfg: Graph to partition
        max_partitions: Optional emission cap (a warning is logged when hit)

    Returns:
        Partitions in discovery order
    """
    return Partitioner(cfg, max_partitions).run()


def coverage_oracle(cfg: Cfg, loop_bound: int, walk_budget: int = DEFAULT_WALK_BUDGET) -> Set[FrozenSet[int]]:
    """
    Distinct coverage sets of all entry-to-exit walks taking each back edge
    at most loop_bound times

    Raises:
        CoverageExplosionError: When more than walk_budget states are expanded
    """
    if loop_bound < 0:
        raise ValueError("loop bound must not be negative")
    back_edges = sorted(cfg.back_edges)
    edge_index = {edge: i for i, edge in enumerate(back_edges)}

    results: Set[FrozenSet[int]] = set()
    start = (cfg.entry, (0,) * len(back_edges), frozenset({cfg.entry}))
    seen = {start}
    stack = [start]
    steps = 0
    while stack:
        node, counts, cov = stack.pop()
        steps += 1
        if steps > walk_budget:
            raise CoverageExplosionError(walk_budget)
        if node == cfg.exit:
            results.add(cov)
            continue
        for successor in cfg.succ(node):
            next_counts = counts
            index = edge_index.get((node, successor))
            if index is not None:
                if counts[index] >= loop_bound:
                    continue
                next_counts = counts[:index] + (counts[index] + 1,) + counts[index + 1:]
            state = (successor, next_counts, cov | {successor})
            if state not in seen:
                seen.add(state)
                stack.append(state)
    return results
