"""
Mini-language abstract syntax, concrete states and linear paths

Statements and expressions are frozen dataclasses. Source spans are carried
along for rendering but never take part in equality, so a parsed program and
a program built by hand compare structurally.
"""

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union


# Pseudo-variables standing for the input and output channels
INPUT_CHANNEL = "<input>"
OUTPUT_CHANNEL = "<output>"
CHANNELS = frozenset({INPUT_CHANNEL, OUTPUT_CHANNEL})

RESERVED_WORDS = frozenset({
    "skip", "assume", "if", "else", "while", "read", "write", "true", "false",
})


@dataclass(frozen=True)
class Span:
    """Character range [start, end) inside the parsed text"""
    start: int
    end: int


# ============================================================================
# Expressions
# ============================================================================

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class SeqLit:
    items: Tuple['Expr', ...] = ()


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    """Arithmetic: + - *"""
    op: str
    left: 'Expr'
    right: 'Expr'


@dataclass(frozen=True)
class Neg:
    operand: 'Expr'


@dataclass(frozen=True)
class Compare:
    """Comparison: < <= > >= == !="""
    op: str
    left: 'Expr'
    right: 'Expr'


@dataclass(frozen=True)
class BoolOp:
    """Connective: && ||"""
    op: str
    left: 'Expr'
    right: 'Expr'


@dataclass(frozen=True)
class Not:
    operand: 'Expr'


@dataclass(frozen=True)
class SeqOp:
    """insert / delete over a sequence value"""
    op: str
    seq: 'Expr'
    elem: 'Expr'


@dataclass(frozen=True)
class SeqSize:
    seq: 'Expr'


Expr = Union[IntLit, BoolLit, SeqLit, Var, BinOp, Neg, Compare, BoolOp, Not, SeqOp, SeqSize]
BoolExpr = Expr


def expr_vars(expr: Expr) -> FrozenSet[str]:
    """Variables read by an expression"""
    if isinstance(expr, Var):
        return frozenset({expr.name})
    if isinstance(expr, (IntLit, BoolLit)):
        return frozenset()
    if isinstance(expr, SeqLit):
        names: FrozenSet[str] = frozenset()
        for item in expr.items:
            names |= expr_vars(item)
        return names
    if isinstance(expr, (Neg, Not)):
        return expr_vars(expr.operand)
    if isinstance(expr, SeqSize):
        return expr_vars(expr.seq)
    if isinstance(expr, SeqOp):
        return expr_vars(expr.seq) | expr_vars(expr.elem)
    return expr_vars(expr.left) | expr_vars(expr.right)


# ============================================================================
# Statements
# ============================================================================

@dataclass(frozen=True)
class Skip:
    # implicit: stands for an empty block or a missing else branch
    implicit: bool = field(default=False, compare=False)
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Seq:
    first: 'Stmt'
    second: 'Stmt'
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Assume:
    cond: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IfThenElse:
    cond: Expr
    then_branch: 'Stmt'
    else_branch: 'Stmt'
    span: Optional[Span] = field(default=None, compare=False, repr=False)
    cond_span: Optional[Span] = field(default=None, compare=False, repr=False)
    then_span: Optional[Span] = field(default=None, compare=False, repr=False)
    else_span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: 'Stmt'
    span: Optional[Span] = field(default=None, compare=False, repr=False)
    cond_span: Optional[Span] = field(default=None, compare=False, repr=False)
    body_span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Read:
    target: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Write:
    value: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


Stmt = Union[Skip, Seq, Assume, Assign, IfThenElse, While, Read, Write]
ATOMIC_STATEMENTS = (Skip, Assume, Assign, Read, Write)


def flatten_seq(stmt: Stmt) -> List[Stmt]:
    """Statements of a Seq chain in execution order (implicit skips dropped)"""
    if isinstance(stmt, Seq):
        return flatten_seq(stmt.first) + flatten_seq(stmt.second)
    if isinstance(stmt, Skip) and stmt.implicit:
        return []
    return [stmt]


def make_seq(stmts: List[Stmt]) -> Stmt:
    """Right-nested Seq over a statement list; an empty list is an implicit skip"""
    if not stmts:
        return Skip(implicit=True)
    result = stmts[-1]
    for stmt in reversed(stmts[:-1]):
        result = Seq(stmt, result)
    return result


def stmt_effects(stmt: Stmt) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """
    (defs, uses) of an atomic statement or of a branching condition

    Read and write also touch the input / output channel so that slices never
    reorder input consumption.
    """
    if isinstance(stmt, Assign):
        return frozenset({stmt.target}), expr_vars(stmt.value)
    if isinstance(stmt, Read):
        return frozenset({stmt.target, INPUT_CHANNEL}), frozenset({INPUT_CHANNEL})
    if isinstance(stmt, Write):
        return frozenset({OUTPUT_CHANNEL}), expr_vars(stmt.value) | {OUTPUT_CHANNEL}
    if isinstance(stmt, (Assume, IfThenElse, While)):
        return frozenset(), expr_vars(stmt.cond)
    return frozenset(), frozenset()


def program_vars(stmt: Stmt) -> FrozenSet[str]:
    """Every variable a program mentions"""
    if isinstance(stmt, Seq):
        return program_vars(stmt.first) | program_vars(stmt.second)
    if isinstance(stmt, IfThenElse):
        return expr_vars(stmt.cond) | program_vars(stmt.then_branch) | program_vars(stmt.else_branch)
    if isinstance(stmt, While):
        return expr_vars(stmt.cond) | program_vars(stmt.body)
    defs, uses = stmt_effects(stmt)
    return (defs | uses) - CHANNELS


# ============================================================================
# Concrete execution
# ============================================================================

Value = Union[int, Tuple[int, ...]]


class ExecStatus(str, Enum):
    """Terminal status of a concrete run"""
    RUNNING = "running"
    BLOCKED_ASSUME = "blocked_assume"
    DONE = "done"
    ERROR = "error"


@dataclass(frozen=True)
class ConcreteState:
    """
    Snapshot of a concrete run

    Attributes:
        env: variable values (integers or integer tuples)
        input_queue: integers still to be consumed by read
        output_log: integers produced by write
        status: RUNNING until the run ends
        error: message when status is ERROR
        error_kind: "budget", "evaluation" or "input" when status is ERROR
        steps: executed atomic statements and condition evaluations
    """
    env: Mapping[str, Value] = field(default_factory=dict, hash=False)
    input_queue: Tuple[int, ...] = ()
    output_log: Tuple[int, ...] = ()
    status: ExecStatus = ExecStatus.RUNNING
    error: Optional[str] = None
    error_kind: Optional[str] = None
    steps: int = 0

    def __post_init__(self):
        # private copy, read-only
        object.__setattr__(self, 'env', MappingProxyType(dict(self.env)))

    @property
    def budget_exhausted(self) -> bool:
        return self.status == ExecStatus.ERROR and self.error_kind == "budget"


@dataclass(frozen=True)
class LinearPath:
    """Branch-free statement sequence"""
    stmts: Tuple[Stmt, ...]

    def __post_init__(self):
        if not self.is_linear(self.stmts):
            raise ValueError("a linear path may only hold skip, assume, assignment, read and write")

    @staticmethod
    def is_linear(stmts) -> bool:
        return all(isinstance(stmt, ATOMIC_STATEMENTS) for stmt in stmts)

    def to_program(self) -> Stmt:
        return make_seq(list(self.stmts))

    def __len__(self) -> int:
        return len(self.stmts)
