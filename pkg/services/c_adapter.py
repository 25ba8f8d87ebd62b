"""
Grammar adapter for C (tree-sitter-c)

Best-effort mapping. Calls pass bare identifiers and `&x` arguments by
reference, so such arguments count as both read and written.
"""

from typing import List, Optional, Set, Tuple

from models.unified_ast import (
    NodeKind, StatementEffects, UnifiedNode,
    ROLE_ASSERT, ROLE_BODY, ROLE_COMPOUND, ROLE_CONDITION, ROLE_ELSE, ROLE_INIT,
    ROLE_JUMP, ROLE_PASS, ROLE_THEN, ROLE_UPDATE,
)
from services.tree_sitter_adapter import TreeSitterAdapter, UnifyContext, first_named


_DECLARATOR_WRAPPERS = (
    'pointer_declarator', 'array_declarator', 'function_declarator',
    'parenthesized_declarator', 'init_declarator', 'attributed_declarator',
)
_JUMPS = ('break_statement', 'continue_statement', 'goto_statement')
_COMPOUND = ('do_statement', 'switch_statement', 'labeled_statement', 'case_statement')
_TOP_LEVEL_DECLARATIONS = (
    'declaration', 'type_definition', 'struct_specifier', 'union_specifier',
    'enum_specifier', 'preproc_def', 'preproc_function_def', 'preproc_include',
)


def declarator_name(node) -> Optional[str]:
    """Innermost identifier of a (possibly nested) declarator"""
    while node is not None:
        if node.type in ('identifier', 'type_identifier', 'field_identifier'):
            return node.text.decode('utf-8')
        if node.type in _DECLARATOR_WRAPPERS:
            node = node.child_by_field_name('declarator')
            continue
        return None
    return None


def base_name(node) -> Optional[str]:
    """Variable an lvalue ultimately writes into"""
    while node is not None:
        if node.type == 'identifier':
            return node.text.decode('utf-8')
        if node.type in ('field_expression', 'subscript_expression', 'pointer_expression'):
            node = node.child_by_field_name('argument')
        elif node.type == 'parenthesized_expression':
            node = first_named(node)
        else:
            return None
    return None


class _Effects:
    """Identifier scan of one C statement or condition"""

    def __init__(self):
        self.defs: Set[str] = set()
        self.uses: Set[str] = set()
        self.calls: Set[str] = set()

    def scan(self, node) -> '_Effects':
        kind = node.type
        if kind == 'identifier':
            self.uses.add(node.text.decode('utf-8'))
        elif kind in ('comment', 'type_descriptor', 'primitive_type', 'type_identifier', 'string_literal'):
            pass
        elif kind == 'field_expression':
            self.scan(node.child_by_field_name('argument'))
        elif kind == 'cast_expression':
            self.scan(node.child_by_field_name('value'))
        elif kind == 'call_expression':
            self._call(node)
        elif kind == 'assignment_expression':
            self._assignment(node)
        elif kind == 'update_expression':
            target = base_name(node.child_by_field_name('argument'))
            if target:
                self.defs.add(target)
            self.scan(node.child_by_field_name('argument'))
        elif kind == 'init_declarator':
            name = declarator_name(node)
            if name:
                self.defs.add(name)
            value = node.child_by_field_name('value')
            if value is not None:
                self.scan(value)
        else:
            for child in node.named_children:
                self.scan(child)
        return self

    def _call(self, node) -> None:
        function = node.child_by_field_name('function')
        if function is not None and function.type == 'identifier':
            self.calls.add(function.text.decode('utf-8'))
        elif function is not None and function.type == 'field_expression':
            field = function.child_by_field_name('field')
            if field is not None:
                self.calls.add(field.text.decode('utf-8'))
            self.scan(function)
        elif function is not None:
            self.scan(function)

        arguments = node.child_by_field_name('arguments')
        for argument in (arguments.named_children if arguments is not None else []):
            if argument.type == 'identifier':
                self.defs.add(argument.text.decode('utf-8'))
            elif argument.type == 'pointer_expression' and argument.children and argument.children[0].type == '&':
                target = base_name(argument.child_by_field_name('argument'))
                if target:
                    self.defs.add(target)
            self.scan(argument)

    def _assignment(self, node) -> None:
        left = node.child_by_field_name('left')
        operator = node.child_by_field_name('operator')
        target = base_name(left)
        if target:
            self.defs.add(target)
        plain = operator is not None and operator.type == '=' and left is not None and left.type == 'identifier'
        if not plain and left is not None:
            self.scan(left)
        right = node.child_by_field_name('right')
        if right is not None:
            self.scan(right)

    def result(self, exits: bool = False) -> StatementEffects:
        return StatementEffects(
            defs=frozenset(self.defs),
            uses=frozenset(self.uses),
            calls=frozenset(self.calls),
            exits=exits,
        )


def c_effects(node, exits: bool = False) -> StatementEffects:
    return _Effects().scan(node).result(exits)


class CAdapter(TreeSitterAdapter):
    """Adapter for `.c` / `.h` sources"""

    language = "c"
    extensions = (".c", ".h")
    fence_tag = "c"
    comment_prefix = "//"

    KIND_MAP = {
        'function_definition': NodeKind.FUNCTION_DEF,
        'if_statement': NodeKind.IF,
        'while_statement': NodeKind.WHILE,
        'for_statement': NodeKind.FOR,
        'return_statement': NodeKind.RETURN,
        'compound_statement': NodeKind.BLOCK,
        'declaration': NodeKind.DECLARATION,
        'type_definition': NodeKind.DECLARATION,
        'preproc_def': NodeKind.DECLARATION,
        'preproc_function_def': NodeKind.DECLARATION,
        'comment': NodeKind.COMMENT,
    }

    @classmethod
    def language_object(cls):
        import tree_sitter_c
        from tree_sitter import Language

        return Language(tree_sitter_c.language())

    # Text forms

    def assume_text(self, condition: str) -> str:
        return f"assume({condition});"

    def unreachable_text(self) -> str:
        return "assume(0);"

    def terminate_statement(self, text: str) -> str:
        text = text.rstrip()
        return text if text.endswith(";") else text + ";"

    # ------------------------------------------------------------------
    # Mapping
    # ------------------------------------------------------------------

    def unify_statement(self, node, ctx: UnifyContext, top_level: bool) -> Optional[UnifiedNode]:
        kind = node.type
        if kind == 'comment':
            return self.comment(node, ctx)
        if kind == 'function_definition':
            return self._function(node, ctx)
        if top_level:
            if kind == 'ERROR':
                return self.opaque(node, ctx, None)
            return self._top_level_declaration(node, ctx)

        if kind == 'declaration':
            return self._local_declaration(node, ctx, role=None)
        if kind == 'expression_statement':
            return self._expression_statement(node, ctx, role=None)
        if kind == 'if_statement':
            return self._if(node, ctx)
        if kind == 'while_statement':
            cond = self._condition(node.child_by_field_name('condition'), ctx)
            body = self._branch(node.child_by_field_name('body'), ctx, ROLE_BODY)
            return UnifiedNode(NodeKind.WHILE, ctx.range_of(node), (cond, body))
        if kind == 'for_statement':
            return self._for(node, ctx)
        if kind == 'return_statement':
            return ctx.record(
                UnifiedNode(NodeKind.RETURN, ctx.range_of(node)),
                c_effects(node, exits=True),
            )
        if kind in _JUMPS:
            return self.opaque(node, ctx, ROLE_JUMP)
        if kind == 'type_definition':
            return UnifiedNode(NodeKind.DECLARATION, ctx.range_of(node), name_hint=declarator_name(node.child_by_field_name('declarator')))
        return self.opaque(node, ctx, ROLE_COMPOUND, uses=c_effects(node).uses)

    def _function(self, node, ctx: UnifyContext) -> UnifiedNode:
        declarator = node.child_by_field_name('declarator')
        name = declarator_name(declarator)
        params: List[str] = []
        function_declarator = declarator
        while function_declarator is not None and function_declarator.type != 'function_declarator':
            function_declarator = function_declarator.child_by_field_name('declarator')
        if function_declarator is not None:
            parameters = function_declarator.child_by_field_name('parameters')
            for parameter in (parameters.named_children if parameters is not None else []):
                if parameter.type == 'parameter_declaration':
                    param_name = declarator_name(parameter.child_by_field_name('declarator'))
                    if param_name:
                        params.append(param_name)
        body = self._block(node.child_by_field_name('body'), ctx, ROLE_BODY)
        return UnifiedNode(
            NodeKind.FUNCTION_DEF, ctx.range_of(node), (body,),
            name_hint=name, params=tuple(params),
        )

    def _top_level_declaration(self, node, ctx: UnifyContext) -> UnifiedNode:
        name = None
        if node.type in ('declaration', 'type_definition'):
            declarator = node.child_by_field_name('declarator')
            name = declarator_name(declarator)
        elif node.type in ('struct_specifier', 'union_specifier', 'enum_specifier', 'preproc_def', 'preproc_function_def'):
            name_node = node.child_by_field_name('name')
            name = name_node.text.decode('utf-8') if name_node is not None else None
        return UnifiedNode(NodeKind.DECLARATION, ctx.range_of(node), name_hint=name)

    def _local_declaration(self, node, ctx: UnifyContext, role: Optional[str]) -> UnifiedNode:
        declarators = node.children_by_field_name('declarator')
        name = declarator_name(declarators[0]) if declarators else None
        initialized = any(d.type == 'init_declarator' for d in declarators)
        if not initialized and role is None:
            return UnifiedNode(NodeKind.DECLARATION, ctx.range_of(node), name_hint=name)
        return ctx.record(
            UnifiedNode(NodeKind.DECLARATION, ctx.range_of(node), name_hint=name, role=ROLE_INIT),
            c_effects(node),
        )

    def _expression_statement(self, node, ctx: UnifyContext, role: Optional[str]) -> UnifiedNode:
        inner = first_named(node)
        node_range = ctx.range_of(node)
        if inner is None:
            return ctx.record(UnifiedNode(NodeKind.OTHER, node_range, role=role or ROLE_PASS), StatementEffects())

        if inner.type == 'call_expression':
            function = inner.child_by_field_name('function')
            callee = function.text.decode('utf-8') if function is not None and function.type == 'identifier' else None
            arguments = inner.child_by_field_name('arguments')
            first_argument = first_named(arguments) if arguments is not None else None
            if callee in ('assume', 'assert') and first_argument is not None:
                cond = ctx.record(
                    UnifiedNode(NodeKind.CONDITION, ctx.range_of(first_argument), role=ROLE_CONDITION),
                    c_effects(first_argument),
                )
                kind = NodeKind.ASSUME if callee == 'assume' else NodeKind.OTHER
                statement_role = None if callee == 'assume' else ROLE_ASSERT
                effects = c_effects(first_argument)
                return ctx.record(
                    UnifiedNode(kind, node_range, (cond,), role=role or statement_role),
                    StatementEffects(uses=effects.uses, calls=effects.calls),
                )
            return ctx.record(UnifiedNode(NodeKind.CALL, node_range, name_hint=callee, role=role), c_effects(inner))

        if inner.type in ('assignment_expression', 'update_expression'):
            target = inner.child_by_field_name('left') or inner.child_by_field_name('argument')
            return ctx.record(
                UnifiedNode(NodeKind.ASSIGNMENT, node_range, name_hint=base_name(target), role=role),
                c_effects(inner),
            )
        return ctx.record(UnifiedNode(NodeKind.OTHER, node_range, role=role), c_effects(inner))

    def _condition(self, node, ctx: UnifyContext) -> UnifiedNode:
        target = node
        if node is not None and node.type == 'parenthesized_expression':
            target = first_named(node) or node
        return ctx.record(
            UnifiedNode(NodeKind.CONDITION, ctx.range_of(target), role=ROLE_CONDITION),
            c_effects(target),
        )

    def _block(self, node, ctx: UnifyContext, role: str) -> UnifiedNode:
        items = self.unify_items(node.children, ctx)
        return UnifiedNode(NodeKind.BLOCK, ctx.range_of(node), tuple(items), role=role)

    def _branch(self, node, ctx: UnifyContext, role: str) -> UnifiedNode:
        """Branch body; a braceless statement gets a block of the same range"""
        if node.type == 'compound_statement':
            return self._block(node, ctx, role)
        item = self.unify_statement(node, ctx, top_level=False)
        children: Tuple[UnifiedNode, ...] = (item,) if item is not None else ()
        return UnifiedNode(NodeKind.BLOCK, ctx.range_of(node), children, role=role)

    def _if(self, node, ctx: UnifyContext) -> UnifiedNode:
        cond = self._condition(node.child_by_field_name('condition'), ctx)
        children = [cond, self._branch(node.child_by_field_name('consequence'), ctx, ROLE_THEN)]
        alternative = node.child_by_field_name('alternative')
        if alternative is not None:
            if alternative.type == 'else_clause':
                alternative = first_named(alternative)
            if alternative is not None:
                children.append(self._branch(alternative, ctx, ROLE_ELSE))
        return UnifiedNode(NodeKind.IF, ctx.range_of(node), tuple(children))

    def _for(self, node, ctx: UnifyContext) -> UnifiedNode:
        condition = node.child_by_field_name('condition')
        if condition is None:
            # for (;;) has no loop test to branch on
            return self.opaque(node, ctx, ROLE_COMPOUND, uses=c_effects(node).uses)

        children: List[UnifiedNode] = []
        initializer = node.child_by_field_name('initializer')
        if initializer is not None:
            if initializer.type == 'declaration':
                children.append(self._local_declaration(initializer, ctx, role=ROLE_INIT))
            else:
                children.append(ctx.record(
                    UnifiedNode(NodeKind.ASSIGNMENT, ctx.range_of(initializer), role=ROLE_INIT),
                    c_effects(initializer),
                ))
        cond = ctx.record(
            UnifiedNode(NodeKind.CONDITION, ctx.range_of(condition), role=ROLE_CONDITION),
            c_effects(condition),
        )
        children.append(cond)
        update = node.child_by_field_name('update')
        if update is not None:
            children.append(ctx.record(
                UnifiedNode(NodeKind.ASSIGNMENT, ctx.range_of(update), role=ROLE_UPDATE),
                c_effects(update),
            ))
        children.append(self._branch(node.child_by_field_name('body'), ctx, ROLE_BODY))
        return UnifiedNode(NodeKind.FOR, ctx.range_of(node), tuple(children))
