"""
Grammar adapter for Python (tree-sitter-python)

Accepts the `assume <expr>` pseudo-statement of annotated case studies: the
keyword is swapped for the equally long `assert` before parsing and the
resulting statements are mapped to ASSUME nodes.
"""

import re
from typing import FrozenSet, List, Optional, Set, Tuple

from models.unified_ast import (
    NodeKind, StatementEffects, UnifiedNode,
    ROLE_ASSERT, ROLE_BODY, ROLE_COMPOUND, ROLE_CONDITION, ROLE_ELSE,
    ROLE_JUMP, ROLE_PASS, ROLE_THEN,
)
from services.tree_sitter_adapter import TreeSitterAdapter, UnifyContext, first_named


_ASSUME_KEYWORD = re.compile(rb'(?m)^([ \t]*)assume(?=[ \t(])')
_DECLARATIONS = (
    'import_statement', 'import_from_statement', 'future_import_statement',
    'global_statement', 'nonlocal_statement',
)
_TARGET_CONTAINERS = ('pattern_list', 'tuple_pattern', 'list_pattern', 'tuple', 'list', 'list_splat_pattern', 'parenthesized_expression')


def _name(node) -> str:
    return node.text.decode('utf-8')


def base_name(node) -> Optional[str]:
    """Variable an assignment target or method receiver ultimately refers to"""
    while node is not None:
        if node.type == 'identifier':
            return _name(node)
        if node.type == 'attribute':
            node = node.child_by_field_name('object')
        elif node.type == 'subscript':
            node = node.child_by_field_name('value')
        elif node.type == 'parenthesized_expression':
            node = first_named(node)
        else:
            return None
    return None


class _Effects:
    """Identifier scan of one Python statement or condition"""

    def __init__(self):
        self.defs: Set[str] = set()
        self.uses: Set[str] = set()
        self.calls: Set[str] = set()

    def scan(self, node) -> '_Effects':
        if node is None:
            return self
        kind = node.type
        if kind == 'identifier':
            self.uses.add(_name(node))
        elif kind in ('comment', 'string_content', 'type'):
            pass
        elif kind == 'attribute':
            self.scan(node.child_by_field_name('object'))
        elif kind == 'keyword_argument':
            self.scan(node.child_by_field_name('value'))
        elif kind == 'call':
            self._call(node)
        elif kind in ('assignment', 'augmented_assignment'):
            self.assignment(node)
        elif kind == 'named_expression':
            name = node.child_by_field_name('name')
            if name is not None:
                self.defs.add(_name(name))
            self.scan(node.child_by_field_name('value'))
        else:
            for child in node.named_children:
                self.scan(child)
        return self

    def _call(self, node) -> None:
        function = node.child_by_field_name('function')
        if function is not None and function.type == 'identifier':
            self.calls.add(_name(function))
        elif function is not None and function.type == 'attribute':
            method = function.child_by_field_name('attribute')
            if method is not None:
                self.calls.add(_name(method))
            receiver = base_name(function.child_by_field_name('object'))
            if receiver:
                # a method call may mutate its receiver
                self.defs.add(receiver)
            self.scan(function)
        else:
            self.scan(function)
        self.scan(node.child_by_field_name('arguments'))

    def assignment(self, node) -> None:
        augmented = node.type == 'augmented_assignment'
        self.target(node.child_by_field_name('left'), read_too=augmented)
        right = node.child_by_field_name('right')
        if right is not None:
            self.scan(right)

    def target(self, node, read_too: bool = False) -> None:
        if node is None:
            return
        if node.type == 'identifier':
            self.defs.add(_name(node))
            if read_too:
                self.uses.add(_name(node))
        elif node.type in _TARGET_CONTAINERS:
            for child in node.named_children:
                self.target(child, read_too)
        elif node.type in ('subscript', 'attribute'):
            base = base_name(node)
            if base:
                self.defs.add(base)
            self.scan(node)
        else:
            self.scan(node)

    def result(self, exits: bool = False) -> StatementEffects:
        return StatementEffects(
            defs=frozenset(self.defs),
            uses=frozenset(self.uses),
            calls=frozenset(self.calls),
            exits=exits,
        )


def python_effects(node, exits: bool = False) -> StatementEffects:
    return _Effects().scan(node).result(exits)


class PythonAdapter(TreeSitterAdapter):
    """Adapter for `.py` sources"""

    language = "python"
    extensions = (".py",)
    fence_tag = "python"
    comment_prefix = "#"

    KIND_MAP = {
        'function_definition': NodeKind.FUNCTION_DEF,
        'if_statement': NodeKind.IF,
        'while_statement': NodeKind.WHILE,
        'for_statement': NodeKind.FOR,
        'return_statement': NodeKind.RETURN,
        'block': NodeKind.BLOCK,
        'class_definition': NodeKind.DECLARATION,
        'import_statement': NodeKind.DECLARATION,
        'import_from_statement': NodeKind.DECLARATION,
        'comment': NodeKind.COMMENT,
    }

    @classmethod
    def language_object(cls):
        import tree_sitter_python
        from tree_sitter import Language

        return Language(tree_sitter_python.language())

    def prepare(self, raw: bytes) -> Tuple[bytes, FrozenSet[int]]:
        rewritten = frozenset(m.start() + len(m.group(1)) for m in _ASSUME_KEYWORD.finditer(raw))
        return _ASSUME_KEYWORD.sub(rb'\1assert', raw), rewritten

    # Text forms

    def assume_text(self, condition: str) -> str:
        return f"assume {condition}"

    def negate(self, condition: str) -> str:
        return f"not ({condition})"

    def conjoin(self, conditions) -> str:
        parts = [c for c in conditions if c]
        if len(parts) == 1:
            return parts[0]
        return " and ".join(f"({c})" for c in parts)

    def empty_block_text(self) -> Optional[str]:
        return "pass"

    def deleted_branch_text(self) -> Optional[str]:
        return None

    def wrap_branch(self, text: str, indent: str) -> str:
        inner = text.replace("\n", "\n    ")
        return "else:\n" + indent + "    " + inner

    def hoisted_body_text(self, text: str) -> str:
        if text.startswith("elif"):
            return text[2:]
        return text

    def unreachable_else(self, indent: str) -> str:
        return "\n" + indent + "else:\n" + indent + "    " + self.unreachable_text()

    # ------------------------------------------------------------------
    # Mapping
    # ------------------------------------------------------------------

    def unify_statement(self, node, ctx: UnifyContext, top_level: bool) -> Optional[UnifiedNode]:
        kind = node.type
        if kind == 'comment':
            return self.comment(node, ctx)
        if kind == 'decorated_definition':
            definition = node.child_by_field_name('definition')
            if definition is not None and definition.type == 'function_definition':
                return self._function(definition, ctx, outer=node)
            return self._class(definition or node, ctx, outer=node)
        if kind == 'function_definition':
            return self._function(node, ctx, outer=node)
        if kind == 'class_definition':
            return self._class(node, ctx, outer=node)
        if kind in _DECLARATIONS:
            return UnifiedNode(NodeKind.DECLARATION, ctx.range_of(node))
        if kind == 'if_statement':
            return self._if(node, ctx, node.children_by_field_name('alternative'), start=node.start_byte)
        if kind == 'while_statement':
            if node.child_by_field_name('alternative') is not None:
                return self.opaque(node, ctx, ROLE_COMPOUND, uses=python_effects(node).uses)
            cond = self._condition(node.child_by_field_name('condition'), ctx)
            body = self._block(node.child_by_field_name('body'), ctx, ROLE_BODY)
            return UnifiedNode(NodeKind.WHILE, ctx.range_of(node), (cond, body))
        if kind == 'for_statement':
            return self._for(node, ctx)
        if kind == 'expression_statement':
            return self._expression_statement(node, ctx)
        if kind == 'return_statement':
            return ctx.record(UnifiedNode(NodeKind.RETURN, ctx.range_of(node)), python_effects(node, exits=True))
        if kind == 'pass_statement':
            return ctx.record(UnifiedNode(NodeKind.OTHER, ctx.range_of(node), role=ROLE_PASS), StatementEffects())
        if kind in ('break_statement', 'continue_statement'):
            return self.opaque(node, ctx, ROLE_JUMP)
        if kind == 'raise_statement':
            return self.opaque(node, ctx, ROLE_JUMP, uses=python_effects(node).uses, exits=True)
        if kind == 'assert_statement':
            return self._assert(node, ctx)
        return self.opaque(node, ctx, ROLE_COMPOUND, uses=python_effects(node).uses)

    def _function(self, node, ctx: UnifyContext, outer) -> UnifiedNode:
        name = node.child_by_field_name('name')
        params: List[str] = []
        parameters = node.child_by_field_name('parameters')
        for parameter in (parameters.named_children if parameters is not None else []):
            if parameter.type == 'identifier':
                params.append(_name(parameter))
            elif parameter.type in ('default_parameter', 'typed_default_parameter'):
                param_name = parameter.child_by_field_name('name')
                if param_name is not None:
                    params.append(_name(param_name))
            else:
                identifier = next((c for c in parameter.named_children if c.type == 'identifier'), None)
                if identifier is not None:
                    params.append(_name(identifier))
        body = self._block(node.child_by_field_name('body'), ctx, ROLE_BODY)
        return UnifiedNode(
            NodeKind.FUNCTION_DEF, ctx.range_of(outer), (body,),
            name_hint=_name(name) if name is not None else None, params=tuple(params),
        )

    def _class(self, node, ctx: UnifyContext, outer) -> UnifiedNode:
        name = node.child_by_field_name('name')
        return UnifiedNode(NodeKind.DECLARATION, ctx.range_of(outer), name_hint=_name(name) if name is not None else None)

    def _block(self, node, ctx: UnifyContext, role: str) -> UnifiedNode:
        items = self.unify_items(node.children, ctx)
        return UnifiedNode(NodeKind.BLOCK, ctx.range_of(node), tuple(items), role=role)

    def _condition(self, node, ctx: UnifyContext) -> UnifiedNode:
        return ctx.record(
            UnifiedNode(NodeKind.CONDITION, ctx.range_of(node), role=ROLE_CONDITION),
            python_effects(node),
        )

    def _if(self, node, ctx: UnifyContext, alternatives, start: int) -> UnifiedNode:
        """Conditional from `start` to the end of the whole if statement (elif chains nest)"""
        if_range = ctx.span(start, _clause_end(node, alternatives))
        cond = self._condition(node.child_by_field_name('condition'), ctx)
        children = [cond, self._block(node.child_by_field_name('consequence'), ctx, ROLE_THEN)]
        if alternatives:
            head, rest = alternatives[0], alternatives[1:]
            if head.type == 'elif_clause':
                nested = self._if(head, ctx, rest, start=head.start_byte)
                children.append(UnifiedNode(NodeKind.BLOCK, nested.range, (nested,), role=ROLE_ELSE))
            else:
                children.append(self._block(head.child_by_field_name('body'), ctx, ROLE_ELSE))
        return UnifiedNode(NodeKind.IF, if_range, tuple(children))

    def _for(self, node, ctx: UnifyContext) -> UnifiedNode:
        if node.child_by_field_name('alternative') is not None or node.children[0].type == 'async':
            return self.opaque(node, ctx, ROLE_COMPOUND, uses=python_effects(node).uses)
        left = node.child_by_field_name('left')
        right = node.child_by_field_name('right')
        header = _Effects()
        header.target(left)
        header.scan(right)
        cond = ctx.record(
            UnifiedNode(NodeKind.CONDITION, ctx.span(left.start_byte, right.end_byte), role=ROLE_CONDITION),
            header.result(),
        )
        body = self._block(node.child_by_field_name('body'), ctx, ROLE_BODY)
        return UnifiedNode(NodeKind.FOR, ctx.range_of(node), (cond, body))

    def _expression_statement(self, node, ctx: UnifyContext) -> UnifiedNode:
        inner = first_named(node)
        node_range = ctx.range_of(node)
        effects = python_effects(node)
        if inner is not None and inner.type in ('assignment', 'augmented_assignment'):
            target = inner.child_by_field_name('left')
            return ctx.record(UnifiedNode(NodeKind.ASSIGNMENT, node_range, name_hint=base_name(target)), effects)
        if inner is not None and inner.type == 'call':
            function = inner.child_by_field_name('function')
            callee = None
            if function is not None and function.type == 'identifier':
                callee = _name(function)
            elif function is not None and function.type == 'attribute':
                method = function.child_by_field_name('attribute')
                callee = _name(method) if method is not None else None
            return ctx.record(UnifiedNode(NodeKind.CALL, node_range, name_hint=callee), effects)
        return ctx.record(UnifiedNode(NodeKind.OTHER, node_range), effects)

    def _assert(self, node, ctx: UnifyContext) -> UnifiedNode:
        expression = first_named(node)
        effects = python_effects(node)
        children: Tuple[UnifiedNode, ...] = ()
        if expression is not None:
            children = (self._condition(expression, ctx),)
        if node.start_byte in ctx.rewritten:
            return ctx.record(UnifiedNode(NodeKind.ASSUME, ctx.range_of(node), children), effects)
        return ctx.record(UnifiedNode(NodeKind.OTHER, ctx.range_of(node), children, role=ROLE_ASSERT), effects)


def _clause_end(node, alternatives) -> int:
    """End byte of an if statement or elif clause together with its remaining alternatives"""
    if alternatives:
        return max(node.end_byte, alternatives[-1].end_byte)
    return node.end_byte
