"""
Mini-language parser and canonical pretty-printer

Concrete syntax (see docs/mini_language.md): one statement per line (or
separated by ';'), brace-delimited blocks, '#' comments.
"""

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from models.mini_ast import (
    RESERVED_WORDS, Span,
    IntLit, BoolLit, SeqLit, Var, BinOp, Neg, Compare, BoolOp, Not, SeqOp, SeqSize, Expr,
    Skip, Seq, Assume, Assign, IfThenElse, While, Read, Write, Stmt,
    flatten_seq, make_seq,
)
from utils.exceptions import MiniSyntaxError


@dataclass(frozen=True)
class Token:
    kind: str      # NUM, IDENT, OP, NEWLINE, EOF
    text: str
    start: int
    end: int
    line: int
    column: int


@dataclass(frozen=True)
class Comment:
    text: str
    start: int
    end: int


_TOKEN_PATTERN = re.compile(
    r'(?P<ws>[ \t\r]+)'
    r'|(?P<comment>#[^\n]*)'
    r'|(?P<newline>\n)'
    r'|(?P<num>[0-9]+)'
    r'|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)'
    r'|(?P<op>:=|<=|>=|==|!=|&&|\|\||[-+*<>!=(){}\[\].,;])'
)

_METHODS = ('insert', 'delete', 'size')


def tokenize(text: str) -> Tuple[List[Token], List[Comment]]:
    """
    Split mini-language text into tokens and comments

    Raises:
        MiniSyntaxError: on a character outside the language
    """
    tokens: List[Token] = []
    comments: List[Comment] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_PATTERN.match(text, pos)
        if not match:
            raise MiniSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        value = match.group(0)
        column = pos - line_start + 1
        if kind == 'comment':
            comments.append(Comment(value, pos, match.end()))
        elif kind == 'newline':
            tokens.append(Token('NEWLINE', value, pos, match.end(), line, column))
            line += 1
            line_start = match.end()
        elif kind != 'ws':
            tokens.append(Token(kind.upper(), value, pos, match.end(), line, column))
        pos = match.end()
    tokens.append(Token('EOF', '', len(text), len(text), line, len(text) - line_start + 1))
    return tokens, comments


class MiniParser:
    """Recursive-descent parser producing span-annotated statements"""

    def __init__(self, text: str):
        self.text = text
        self.tokens, self.comments = tokenize(text)
        self.index = 0

    # ------------------------------------------------------------------
    # Token helpers
    # ------------------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self.current
        if token.kind != 'EOF':
            self.index += 1
        return token

    def _at(self, text: str) -> bool:
        return self.current.kind in ('OP', 'IDENT') and self.current.text == text

    def _error(self, reason: str, token: Optional[Token] = None) -> MiniSyntaxError:
        token = token or self.current
        return MiniSyntaxError(reason, token.line, token.column)

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            found = self.current.text or 'end of input'
            if self.current.kind == 'NEWLINE':
                found = 'end of line'
            raise self._error(f"expected '{text}' but found '{found}'")
        return self._advance()

    def _skip_separators(self) -> None:
        while self.current.kind == 'NEWLINE' or self._at(';'):
            self._advance()

    def _variable_name(self) -> Token:
        token = self.current
        if token.kind != 'IDENT':
            raise self._error(f"expected a variable name but found '{token.text or 'end of input'}'")
        if token.text in RESERVED_WORDS:
            raise self._error(f"reserved word '{token.text}' cannot be used as a variable name")
        return self._advance()

    # ------------------------------------------------------------------
    # Statements
    # ------------------------------------------------------------------

    def parse_program(self) -> Stmt:
        stmts = self._statement_list(top_level=True)
        if self.current.kind != 'EOF':
            raise self._error(f"unexpected '{self.current.text}'")
        return self._sequence(stmts)

    def _sequence(self, stmts: List[Stmt]) -> Stmt:
        result = make_seq(stmts)
        if isinstance(result, Seq):
            result = self._respan(result)
        return result

    def _respan(self, seq: Seq) -> Seq:
        second = self._respan(seq.second) if isinstance(seq.second, Seq) else seq.second
        return Seq(seq.first, second, span=Span(seq.first.span.start, second.span.end))

    def _statement_list(self, top_level: bool) -> List[Stmt]:
        stmts: List[Stmt] = []
        self._skip_separators()
        while self.current.kind != 'EOF' and not self._at('}'):
            stmts.append(self._statement())
            if self.current.kind == 'EOF' or self._at('}'):
                break
            if self.current.kind != 'NEWLINE' and not self._at(';'):
                raise self._error(f"expected end of statement but found '{self.current.text}'")
            self._skip_separators()
        if top_level and self._at('}'):
            raise self._error("unmatched '}'")
        return stmts

    def _block(self) -> Tuple[Stmt, Span]:
        open_token = self._expect('{')
        stmts = self._statement_list(top_level=False)
        close_token = self._expect('}')
        return self._sequence(stmts), Span(open_token.start, close_token.end)

    def _statement(self) -> Stmt:
        token = self.current
        if token.kind != 'IDENT':
            raise self._error(f"expected a statement but found '{token.text}'")

        if token.text in RESERVED_WORDS and self._peek().text == ':=':
            raise self._error(f"reserved word '{token.text}' cannot be used as a variable name")

        if token.text == 'skip':
            self._advance()
            return Skip(span=Span(token.start, token.end))
        if token.text == 'assume':
            self._advance()
            self._expect('(')
            cond = self._expression()
            close = self._expect(')')
            return Assume(cond, span=Span(token.start, close.end))
        if token.text == 'read':
            self._advance()
            self._expect('(')
            name = self._variable_name()
            close = self._expect(')')
            return Read(name.text, span=Span(token.start, close.end))
        if token.text == 'write':
            self._advance()
            self._expect('(')
            value = self._expression()
            close = self._expect(')')
            return Write(value, span=Span(token.start, close.end))
        if token.text == 'if':
            return self._if_statement()
        if token.text == 'while':
            self._advance()
            self._expect('(')
            cond_start = self.current.start
            cond = self._expression()
            cond_end = self.tokens[self.index - 1].end
            self._expect(')')
            body, body_span = self._block()
            return While(cond, body, span=Span(token.start, body_span.end),
                         cond_span=Span(cond_start, cond_end), body_span=body_span)
        if token.text in RESERVED_WORDS:
            raise self._error(f"reserved word '{token.text}' cannot start a statement here")

        name = self._advance()
        if self._at(':='):
            self._advance()
            if self.current.kind in ('NEWLINE', 'EOF') or self._at(';') or self._at('}'):
                raise self._error("missing expression after ':='")
            value = self._expression()
            end = self.tokens[self.index - 1].end
            return Assign(name.text, value, span=Span(name.start, end))
        if self._at('.') and self._peek().text in ('insert', 'delete'):
            self._advance()
            method = self._advance().text
            self._expect('(')
            elem = self._expression()
            close = self._expect(')')
            return Assign(name.text, SeqOp(method, Var(name.text), elem), span=Span(name.start, close.end))
        raise self._error(f"expected ':=' after '{name.text}'")

    def _if_statement(self) -> Stmt:
        token = self._advance()
        self._expect('(')
        cond_start = self.current.start
        cond = self._expression()
        cond_end = self.tokens[self.index - 1].end
        self._expect(')')
        then_branch, then_span = self._block()

        # 'else' may follow on the same line or after line breaks
        lookahead = self.index
        while self.tokens[lookahead].kind == 'NEWLINE':
            lookahead += 1
        if self.tokens[lookahead].kind == 'IDENT' and self.tokens[lookahead].text == 'else':
            self.index = lookahead + 1
            if self._at('if'):
                nested = self._if_statement()
                else_branch, else_span = nested, nested.span
            else:
                else_branch, else_span = self._block()
            return IfThenElse(cond, then_branch, else_branch,
                              span=Span(token.start, else_span.end),
                              cond_span=Span(cond_start, cond_end),
                              then_span=then_span, else_span=else_span)
        return IfThenElse(cond, then_branch, Skip(implicit=True),
                          span=Span(token.start, then_span.end),
                          cond_span=Span(cond_start, cond_end),
                          then_span=then_span)

    # ------------------------------------------------------------------
    # Expressions (lowest to highest precedence)
    # ------------------------------------------------------------------

    def _expression(self) -> Expr:
        return self._or()

    def _or(self) -> Expr:
        left = self._and()
        while self._at('||'):
            self._advance()
            left = BoolOp('||', left, self._and())
        return left

    def _and(self) -> Expr:
        left = self._not()
        while self._at('&&'):
            self._advance()
            left = BoolOp('&&', left, self._not())
        return left

    def _not(self) -> Expr:
        if self._at('!'):
            self._advance()
            return Not(self._not())
        return self._comparison()

    def _comparison(self) -> Expr:
        left = self._additive()
        if self.current.kind == 'OP' and self.current.text in ('<', '<=', '>', '>=', '==', '!=', '='):
            op = self._advance().text
            return Compare('==' if op == '=' else op, left, self._additive())
        return left

    def _additive(self) -> Expr:
        left = self._multiplicative()
        while self.current.kind == 'OP' and self.current.text in ('+', '-'):
            op = self._advance().text
            left = BinOp(op, left, self._multiplicative())
        return left

    def _multiplicative(self) -> Expr:
        left = self._unary()
        while self._at('*'):
            self._advance()
            left = BinOp('*', left, self._unary())
        return left

    def _unary(self) -> Expr:
        if self._at('-'):
            self._advance()
            # a minus sign directly before a literal is part of the literal
            if self.current.kind == 'NUM':
                return IntLit(-int(self._advance().text))
            return Neg(self._unary())
        return self._postfix()

    def _postfix(self) -> Expr:
        expr = self._atom()
        while self._at('.'):
            self._advance()
            method = self.current
            if method.kind != 'IDENT' or method.text not in _METHODS:
                raise self._error(f"unknown sequence operation '{method.text}'")
            self._advance()
            self._expect('(')
            if method.text == 'size':
                self._expect(')')
                expr = SeqSize(expr)
            else:
                elem = self._expression()
                self._expect(')')
                expr = SeqOp(method.text, expr, elem)
        return expr

    def _atom(self) -> Expr:
        token = self.current
        if token.kind == 'NUM':
            self._advance()
            return IntLit(int(token.text))
        if token.kind == 'IDENT':
            if token.text == 'true':
                self._advance()
                return BoolLit(True)
            if token.text == 'false':
                self._advance()
                return BoolLit(False)
            return Var(self._variable_name().text)
        if self._at('('):
            self._advance()
            expr = self._expression()
            self._expect(')')
            return expr
        if self._at('['):
            self._advance()
            items = []
            if not self._at(']'):
                items.append(self._expression())
                while self._at(','):
                    self._advance()
                    items.append(self._expression())
            self._expect(']')
            return SeqLit(tuple(items))
        if token.kind in ('NEWLINE', 'EOF'):
            raise self._error("missing expression")
        raise self._error(f"unexpected '{token.text}' in expression")


def parse_mini(source: str) -> Stmt:
    """
    Parse mini-language text into a span-annotated statement tree

    Args:
        source: Program text

    Returns:
        Statement AST (an implicit Skip for an empty program)

    Raises:
        MiniSyntaxError: with line and column of the offending token
    """
    return MiniParser(source).parse_program()


def parse_expression(source: str) -> Expr:
    """Parse a single mini-language expression"""
    parser = MiniParser(source)
    expr = parser._expression()
    if parser.current.kind != 'EOF':
        raise parser._error(f"unexpected '{parser.current.text}' after expression")
    return expr


# ============================================================================
# Pretty-printing
# ============================================================================

_PREC_OR, _PREC_AND, _PREC_NOT, _PREC_CMP, _PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POSTFIX, _PREC_ATOM = range(1, 10)


def _format(expr: Expr) -> Tuple[str, int]:
    if isinstance(expr, IntLit):
        return str(expr.value), (_PREC_NEG if expr.value < 0 else _PREC_ATOM)
    if isinstance(expr, BoolLit):
        return ('true' if expr.value else 'false'), _PREC_ATOM
    if isinstance(expr, Var):
        return expr.name, _PREC_ATOM
    if isinstance(expr, SeqLit):
        return '[' + ', '.join(_wrap(item, _PREC_OR) for item in expr.items) + ']', _PREC_ATOM
    if isinstance(expr, SeqSize):
        return f"{_wrap(expr.seq, _PREC_POSTFIX)}.size()", _PREC_POSTFIX
    if isinstance(expr, SeqOp):
        return f"{_wrap(expr.seq, _PREC_POSTFIX)}.{expr.op}({_wrap(expr.elem, _PREC_OR)})", _PREC_POSTFIX
    if isinstance(expr, Neg):
        inner = _wrap(expr.operand, _PREC_NEG)
        if isinstance(expr.operand, IntLit) or inner.startswith('-'):
            inner = f"({format_expr(expr.operand)})"
        return '-' + inner, _PREC_NEG
    if isinstance(expr, Not):
        return '!' + _wrap(expr.operand, _PREC_POSTFIX), _PREC_NOT
    if isinstance(expr, Compare):
        return f"{_wrap(expr.left, _PREC_ADD)} {expr.op} {_wrap(expr.right, _PREC_ADD)}", _PREC_CMP
    if isinstance(expr, BinOp):
        prec = _PREC_MUL if expr.op == '*' else _PREC_ADD
        return f"{_wrap(expr.left, prec)} {expr.op} {_wrap(expr.right, prec + 1)}", prec
    if isinstance(expr, BoolOp):
        prec = _PREC_OR if expr.op == '||' else _PREC_AND
        return f"{_wrap(expr.left, prec)} {expr.op} {_wrap(expr.right, prec + 1)}", prec
    raise TypeError(f"not an expression: {expr!r}")


def _wrap(expr: Expr, minimum: int) -> str:
    text, prec = _format(expr)
    return text if prec >= minimum else f"({text})"


def format_expr(expr: Expr) -> str:
    """Canonical text of an expression"""
    return _format(expr)[0]


def _format_block(stmt: Stmt, indent: int) -> List[str]:
    lines: List[str] = []
    for item in flatten_seq(stmt):
        lines.extend(_format_stmt(item, indent))
    return lines


def _format_stmt(stmt: Stmt, indent: int) -> List[str]:
    pad = '  ' * indent
    if isinstance(stmt, Skip):
        return [] if stmt.implicit else [pad + 'skip']
    if isinstance(stmt, Seq):
        return _format_block(stmt, indent)
    if isinstance(stmt, Assume):
        return [f"{pad}assume({format_expr(stmt.cond)})"]
    if isinstance(stmt, Read):
        return [f"{pad}read({stmt.target})"]
    if isinstance(stmt, Write):
        return [f"{pad}write({format_expr(stmt.value)})"]
    if isinstance(stmt, Assign):
        value = stmt.value
        if isinstance(value, SeqOp) and value.seq == Var(stmt.target):
            return [f"{pad}{stmt.target}.{value.op}({format_expr(value.elem)})"]
        return [f"{pad}{stmt.target} := {format_expr(value)}"]
    if isinstance(stmt, IfThenElse):
        lines = [f"{pad}if ({format_expr(stmt.cond)}) {{"]
        lines += _format_block(stmt.then_branch, indent + 1)
        if isinstance(stmt.else_branch, Skip) and stmt.else_branch.implicit:
            lines.append(pad + '}')
        else:
            lines.append(pad + '} else {')
            lines += _format_block(stmt.else_branch, indent + 1)
            lines.append(pad + '}')
        return lines
    if isinstance(stmt, While):
        lines = [f"{pad}while ({format_expr(stmt.cond)}) {{"]
        lines += _format_block(stmt.body, indent + 1)
        lines.append(pad + '}')
        return lines
    raise TypeError(f"not a statement: {stmt!r}")


def pretty_print(stmt: Stmt) -> str:
    """
    Canonical program text: two-space indentation, LF line endings

    Args:
        stmt: Program AST

    Returns:
        Text ending in a newline (empty for an empty program)
    """
    lines = _format_stmt(stmt, 0)
    return '\n'.join(lines) + '\n' if lines else ''
