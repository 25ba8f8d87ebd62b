"""
Bounded path unfolding for the mini-language

Turns a program into the set of linear paths it can take, unrolling every
loop at most `loop_bound` times. Conditionals become guarding assumptions.
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Optional, Tuple

from config.settings import settings
from models.mini_ast import (
    Not, Skip, Seq, Assume, IfThenElse, While, Stmt, LinearPath, ATOMIC_STATEMENTS,
)


@dataclass(frozen=True)
class _LoopFrame:
    """Pending loop head with the number of iterations already taken"""
    loop: While
    iterations: int


@dataclass(frozen=True)
class UnfoldResult:
    """
    Paths of a bounded unfold

    Attributes:
        paths: Every linear path within the bound
        truncated: True when some path needed more iterations than the bound
    """
    paths: FrozenSet[LinearPath]
    truncated: bool

    def __iter__(self) -> Iterator[LinearPath]:
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __contains__(self, path) -> bool:
        if not isinstance(path, LinearPath):
            path = LinearPath(tuple(path))
        return path in self.paths


def unfold_bounded(prog: Stmt, loop_bound: Optional[int] = None) -> UnfoldResult:
    """
    Enumerate linear paths with each loop unrolled at most loop_bound times

    Args:
        prog: Program to unfold
        loop_bound: Non-negative iteration bound per loop entry (LOOP_UNFOLD_BOUND when None)

    Returns:
        UnfoldResult with the path set and the truncation flag
    """
    if loop_bound is None:
        loop_bound = settings.LOOP_UNFOLD_BOUND
    if loop_bound < 0:
        raise ValueError("loop bound must not be negative")

    paths = set()
    truncated = False
    stack: List[Tuple[tuple, tuple]] = [((), (prog,))]

    while stack:
        prefix, pending = stack.pop()
        if not pending:
            paths.add(LinearPath(prefix))
            continue

        head, rest = pending[0], pending[1:]

        if isinstance(head, Seq):
            stack.append((prefix, (head.first, head.second) + rest))
        elif isinstance(head, Skip) and head.implicit:
            stack.append((prefix, rest))
        elif isinstance(head, ATOMIC_STATEMENTS):
            stack.append((prefix + (head,), rest))
        elif isinstance(head, IfThenElse):
            stack.append((prefix + (Assume(Not(head.cond)),), (head.else_branch,) + rest))
            stack.append((prefix + (Assume(head.cond),), (head.then_branch,) + rest))
        elif isinstance(head, While):
            stack.append((prefix, (_LoopFrame(head, 0),) + rest))
        elif isinstance(head, _LoopFrame):
            loop = head.loop
            stack.append((prefix + (Assume(Not(loop.cond)),), rest))
            if head.iterations < loop_bound:
                frame = _LoopFrame(loop, head.iterations + 1)
                stack.append((prefix + (Assume(loop.cond),), (loop.body, frame) + rest))
            else:
                truncated = True
        else:
            raise TypeError(f"cannot unfold {head!r}")

    return UnfoldResult(frozenset(paths), truncated)


def count_paths(prog: Stmt, loop_bound: int) -> int:
    """
    Number of paths of a bounded unfold, computed from the unfold equations

    Counts are multiplied through sequences and summed over branches, so
    two distinct control-flow choices that happen to produce equal
    statement lists are counted twice.
    """
    if isinstance(prog, Seq):
        return count_paths(prog.first, loop_bound) * count_paths(prog.second, loop_bound)
    if isinstance(prog, IfThenElse):
        return count_paths(prog.then_branch, loop_bound) + count_paths(prog.else_branch, loop_bound)
    if isinstance(prog, While):
        body = count_paths(prog.body, loop_bound)
        return sum(body ** j for j in range(loop_bound + 1))
    return 1
