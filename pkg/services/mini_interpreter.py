"""
Concrete interpreter for the mini-language

Small-step execution over an explicit work stack. One step is one atomic
statement or one branch / loop condition evaluation.
"""

from typing import Callable, Dict, FrozenSet, List, Optional, Set

from config.settings import settings
from models.mini_ast import (
    INPUT_CHANNEL, OUTPUT_CHANNEL,
    IntLit, BoolLit, SeqLit, Var, BinOp, Neg, Compare, BoolOp, Not, SeqOp, SeqSize, Expr,
    Skip, Seq, Assume, Assign, IfThenElse, While, Read, Write, Stmt,
    ConcreteState, ExecStatus, Value,
)
from utils.exceptions import EvaluationError
from utils.logger import get_logger

logger = get_logger(__name__)

# Called once per executed step with (statement, names read, names written)
StepObserver = Callable[[Stmt, FrozenSet[str], FrozenSet[str]], None]


def _kind(value) -> str:
    if type(value) is bool:
        return "bool"
    if type(value) is int:
        return "int"
    if isinstance(value, tuple):
        return "seq"
    return type(value).__name__


class _Evaluator:
    """Expression evaluator recording every variable it reads"""

    def __init__(self, env: Dict[str, Value]):
        self.env = env
        self.reads: Set[str] = set()

    def eval(self, expr: Expr):
        if isinstance(expr, IntLit):
            return expr.value
        if isinstance(expr, BoolLit):
            return expr.value
        if isinstance(expr, Var):
            self.reads.add(expr.name)
            if expr.name not in self.env:
                raise EvaluationError(f"undefined variable '{expr.name}'")
            return self.env[expr.name]
        if isinstance(expr, SeqLit):
            return tuple(self._int(item, "sequence element") for item in expr.items)
        if isinstance(expr, Neg):
            return -self._int(expr.operand, "operand of unary '-'")
        if isinstance(expr, BinOp):
            left = self._int(expr.left, f"left operand of '{expr.op}'")
            right = self._int(expr.right, f"right operand of '{expr.op}'")
            if expr.op == '+':
                return left + right
            if expr.op == '-':
                return left - right
            return left * right
        if isinstance(expr, Compare):
            return self._compare(expr)
        if isinstance(expr, BoolOp):
            # both sides are always evaluated
            left = self._bool(expr.left, f"left operand of '{expr.op}'")
            right = self._bool(expr.right, f"right operand of '{expr.op}'")
            return (left and right) if expr.op == '&&' else (left or right)
        if isinstance(expr, Not):
            return not self._bool(expr.operand, "operand of '!'")
        if isinstance(expr, SeqSize):
            return len(self._seq(expr.seq, "receiver of size()"))
        if isinstance(expr, SeqOp):
            seq = self._seq(expr.seq, f"receiver of {expr.op}()")
            elem = self._int(expr.elem, f"argument of {expr.op}()")
            if expr.op == 'insert':
                return seq + (elem,)
            if elem in seq:
                index = seq.index(elem)
                return seq[:index] + seq[index + 1:]
            return seq
        raise EvaluationError(f"unsupported expression {expr!r}")

    def _int(self, expr: Expr, what: str) -> int:
        value = self.eval(expr)
        if type(value) is not int:
            raise EvaluationError(f"{what} must be an integer, got {_kind(value)}")
        return value

    def _bool(self, expr: Expr, what: str) -> bool:
        value = self.eval(expr)
        if type(value) is not bool:
            raise EvaluationError(f"{what} must be a boolean, got {_kind(value)}")
        return value

    def _seq(self, expr: Expr, what: str) -> tuple:
        value = self.eval(expr)
        if not isinstance(value, tuple):
            raise EvaluationError(f"{what} must be a sequence, got {_kind(value)}")
        return value

    def _compare(self, expr: Compare) -> bool:
        left = self.eval(expr.left)
        right = self.eval(expr.right)
        if expr.op in ('==', '!='):
            if _kind(left) != _kind(right):
                raise EvaluationError(
                    f"cannot compare {_kind(left)} with {_kind(right)} using '{expr.op}'"
                )
            return (left == right) if expr.op == '==' else (left != right)
        if type(left) is not int or type(right) is not int:
            raise EvaluationError(f"operands of '{expr.op}' must be integers")
        if expr.op == '<':
            return left < right
        if expr.op == '<=':
            return left <= right
        if expr.op == '>':
            return left > right
        return left >= right


class MiniInterpreter:
    """
    Runs mini-language programs on concrete states

    Attributes:
        step_budget: Maximum number of steps before the run is stopped
        observer: Optional callback receiving every executed step
    """

    def __init__(self, step_budget: Optional[int] = None, observer: Optional[StepObserver] = None):
        if step_budget is None:
            step_budget = settings.STEP_BUDGET
        if step_budget <= 0:
            raise ValueError("step budget must be positive")
        self.step_budget = step_budget
        self.observer = observer

    def _observe(self, stmt: Stmt, reads, writes) -> None:
        if self.observer is not None:
            self.observer(stmt, frozenset(reads), frozenset(writes))

    def run(self, prog: Stmt, init: ConcreteState) -> ConcreteState:
        """
        Execute a program from an initial state

        Args:
            prog: Program to run
            init: Initial state (must be RUNNING)

        Returns:
            Final state with status DONE, BLOCKED_ASSUME or ERROR
        """
        if init.status != ExecStatus.RUNNING:
            return init

        env: Dict[str, Value] = dict(init.env)
        queue: List[int] = list(init.input_queue)
        output: List[int] = list(init.output_log)
        steps = init.steps

        def finish(status: ExecStatus, error: Optional[str] = None, kind: Optional[str] = None):
            return ConcreteState(
                env=env,
                input_queue=tuple(queue),
                output_log=tuple(output),
                status=status,
                error=error,
                error_kind=kind,
                steps=steps,
            )

        stack: List[Stmt] = [prog]
        while stack:
            stmt = stack.pop()
            if isinstance(stmt, Seq):
                stack.append(stmt.second)
                stack.append(stmt.first)
                continue
            if isinstance(stmt, Skip) and stmt.implicit:
                continue

            if steps >= self.step_budget:
                logger.debug(f"Step budget of {self.step_budget} exhausted")
                return finish(ExecStatus.ERROR, f"step budget of {self.step_budget} exhausted", "budget")
            steps += 1

            evaluator = _Evaluator(env)
            try:
                if isinstance(stmt, Skip):
                    self._observe(stmt, (), ())

                elif isinstance(stmt, Assume):
                    holds = evaluator._bool(stmt.cond, "assume condition")
                    self._observe(stmt, evaluator.reads, ())
                    if not holds:
                        return finish(ExecStatus.BLOCKED_ASSUME)

                elif isinstance(stmt, Assign):
                    value = evaluator.eval(stmt.value)
                    if type(value) is bool:
                        raise EvaluationError(f"cannot store a boolean in '{stmt.target}'")
                    env[stmt.target] = value
                    self._observe(stmt, evaluator.reads, (stmt.target,))

                elif isinstance(stmt, Read):
                    if not queue:
                        self._observe(stmt, (INPUT_CHANNEL,), ())
                        return finish(ExecStatus.ERROR, f"read({stmt.target}) on an empty input queue", "input")
                    env[stmt.target] = queue.pop(0)
                    self._observe(stmt, (INPUT_CHANNEL,), (stmt.target, INPUT_CHANNEL))

                elif isinstance(stmt, Write):
                    value = evaluator._int(stmt.value, "argument of write")
                    output.append(value)
                    self._observe(stmt, evaluator.reads | {OUTPUT_CHANNEL}, (OUTPUT_CHANNEL,))

                elif isinstance(stmt, IfThenElse):
                    taken = evaluator._bool(stmt.cond, "if condition")
                    self._observe(stmt, evaluator.reads, ())
                    stack.append(stmt.then_branch if taken else stmt.else_branch)

                elif isinstance(stmt, While):
                    taken = evaluator._bool(stmt.cond, "while condition")
                    self._observe(stmt, evaluator.reads, ())
                    if taken:
                        stack.append(stmt)
                        stack.append(stmt.body)

                else:
                    raise EvaluationError(f"unsupported statement {stmt!r}")

            except EvaluationError as e:
                logger.debug(f"Evaluation stopped: {e.reason}")
                return finish(ExecStatus.ERROR, e.reason, "evaluation")

        return finish(ExecStatus.DONE)


def run_concrete(
    prog: Stmt,
    init: ConcreteState,
    step_budget: Optional[int] = None,
    observer: Optional[StepObserver] = None
) -> ConcreteState:
    """
    Run a program on a concrete state

    Args:
        prog: Program to run
        init: Initial state
        step_budget: Positive step limit (STEP_BUDGET when None)
        observer: Optional per-step callback (statement, reads, writes)

    Returns:
        Final ConcreteState

    Example:
        run_concrete(parse_mini("x := 1"), ConcreteState(), 10).env -> {"x": 1}
    """
    return MiniInterpreter(step_budget, observer).run(prog, init)
