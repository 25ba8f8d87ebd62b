"""
Frontend: adapter registry, unit parsing and annotation extraction

Adapters register under a language tag. The mini-language adapter is always
available; tree-sitter adapters register only when their grammar packages
import.
"""

import os
import re
from threading import Lock
from typing import Dict, Iterable, List, Optional, Type, Union

from models.hoare import DEFAULT_PRE, AnnotationMarker, Annotations, HoareSpec
from models.unified_ast import (
    NodeKind, ROLE_ASSERT, ROLE_CONDITION, SourceUnit, UnifiedNode,
    build_symbol_index, check_ranges, is_executable,
)
from services.grammar_adapter import GrammarAdapter
from services.mini_adapter import MiniAdapter
from utils.exceptions import (
    AnnotationConflictError, ConfigurationError, NoPostConditionError,
    SourceReadError, UnknownLanguageError,
)
from utils.logger import get_logger, log_function_call

logger = get_logger(__name__)

_registry: Dict[str, Type[GrammarAdapter]] = {}
_instances: Dict[str, GrammarAdapter] = {}
_registry_lock = Lock()

_MARKER = re.compile(
    r'^(?:#+|//+|/\*+)\s*(?P<tag>PRE|POST)\b(?:\s*:\s*(?P<cond>.*?))?\s*(?:\*/)?\s*$',
    re.DOTALL,
)


# ============================================================================
# Registry
# ============================================================================

def register_adapter(adapter_cls: Type[GrammarAdapter]) -> None:
    """Register an adapter class under its language tag (replaces any previous one)"""
    with _registry_lock:
        _registry[adapter_cls.language] = adapter_cls
        _instances.pop(adapter_cls.language, None)
    logger.debug(f"Registered grammar adapter for '{adapter_cls.language}'")


def get_adapter(language: str) -> GrammarAdapter:
    """
    Shared adapter instance for a language tag

    Raises:
        UnknownLanguageError: If no adapter is registered for the tag
    """
    with _registry_lock:
        if language not in _registry:
            raise UnknownLanguageError(language, list(_registry))
        if language not in _instances:
            _instances[language] = _registry[language]()
        return _instances[language]


def available_languages() -> List[str]:
    return sorted(_registry)


def language_for_path(path: str) -> str:
    """
    Language tag inferred from a file extension

    Raises:
        UnknownLanguageError: If no registered adapter claims the extension
    """
    extension = os.path.splitext(path)[1].lower()
    for language, adapter_cls in sorted(_registry.items()):
        if extension in adapter_cls.extensions:
            return language
    raise UnknownLanguageError(extension or path, list(_registry))


def _register_builtin_adapters() -> None:
    register_adapter(MiniAdapter)
    try:
        from services.c_adapter import CAdapter
        import tree_sitter_c  # noqa: F401
        register_adapter(CAdapter)
    except ImportError:
        logger.debug("tree-sitter C grammar not installed, C adapter unavailable")
    try:
        from services.python_adapter import PythonAdapter
        import tree_sitter_python  # noqa: F401
        register_adapter(PythonAdapter)
    except ImportError:
        logger.debug("tree-sitter Python grammar not installed, Python adapter unavailable")


_register_builtin_adapters()


# ============================================================================
# Parsing
# ============================================================================

@log_function_call
def parse_unit(source: Union[bytes, str], language: str, file_id: str = "<memory>") -> SourceUnit:
    """
    Parse source text into a SourceUnit

    Unparseable regions degrade to opaque `other` nodes; the diagnostics end
    up in `SourceUnit.errors`.

    Args:
        source: Source bytes (text is encoded as UTF-8)
        language: Registered language tag
        file_id: Label used in ranges and messages

    Returns:
        SourceUnit

    Raises:
        UnknownLanguageError: If the language tag is not registered
    """
    adapter = get_adapter(language)
    raw = source.encode('utf-8') if isinstance(source, str) else bytes(source)
    result = adapter.unify_bytes(raw, file_id)

    problems = check_ranges(result.root)
    if problems:
        logger.warning(f"{file_id}: {len(problems)} range problem(s), first: {problems[0]}")

    comments = tuple(sorted(result.comments, key=lambda node: node.start))
    unit = SourceUnit(
        file_id=file_id,
        raw_bytes=raw,
        language=language,
        root=result.root,
        symbol_index=build_symbol_index(result.root),
        effects=dict(result.effects),
        comments=comments,
        errors=tuple(result.errors),
    )
    logger.info(f"Parsed {file_id} ({language}): {len(result.root.children)} top-level item(s)")
    return unit


def read_unit(path: str, language: Optional[str] = None) -> SourceUnit:
    """
    Read and parse a source file

    Raises:
        SourceReadError: If the file cannot be read
        UnknownLanguageError: If no adapter handles the file
    """
    language = language or language_for_path(path)
    try:
        with open(path, 'rb') as handle:
            raw = handle.read()
    except OSError as e:
        raise SourceReadError(path, e.strerror or str(e))
    return parse_unit(raw, language, file_id=path)


# ============================================================================
# Annotations
# ============================================================================

def _condition_text(unit: SourceUnit, statement: UnifiedNode) -> Optional[str]:
    cond = statement.child_with_role(ROLE_CONDITION)
    return unit.source_text(cond).strip() if cond is not None else None


def _statement_before(unit: SourceUnit, comment: UnifiedNode, statements: Iterable[UnifiedNode]) -> Optional[UnifiedNode]:
    """Executable statement ending on the comment's line, before the comment"""
    best = None
    for node in statements:
        if node.end > comment.start:
            continue
        gap = unit.raw_bytes[node.end:comment.start]
        if b'\n' in gap:
            continue
        if best is None or node.start > best.start:
            best = node
    return best


def extract_annotations(unit: SourceUnit) -> Annotations:
    """
    Collect PRE / POST markers of a unit

    A marker either carries its condition (`// POST: info != NULL`) or trails
    an assume / assert statement whose condition it tags
    (`assume len(value) > 0  # PRE`). Tagged statements are pinned so the
    slicer keeps them.

    Raises:
        AnnotationConflictError: If different post-conditions are marked
    """
    annotations = Annotations()
    statements = [node for node in unit.root.walk() if is_executable(node)]

    for comment in unit.comments:
        text = unit.source_text(comment).strip()
        match = _MARKER.match(text)
        if match is None:
            continue
        tag = match.group('tag')
        condition = (match.group('cond') or '').strip() or None
        statement = _statement_before(unit, comment, statements)

        if condition is None and statement is not None:
            tagged = (
                (tag == "PRE" and statement.kind == NodeKind.ASSUME)
                or (tag == "POST" and statement.role == ROLE_ASSERT)
            )
            if tagged:
                condition = _condition_text(unit, statement)
                annotations.pinned.append(statement)
            else:
                logger.warning(
                    f"{unit.file_id}: bare {tag} marker at byte {comment.start} "
                    f"does not tag an {'assume' if tag == 'PRE' else 'assert'} statement"
                )
                statement = None

        annotations.markers.append(AnnotationMarker(tag, condition, comment.range, statement))
        if condition is None:
            continue
        target = annotations.pre if tag == "PRE" else annotations.post
        if condition not in target:
            target.append(condition)

    if len(annotations.post) > 1:
        raise AnnotationConflictError(annotations.post)
    logger.debug(f"{unit.file_id}: {len(annotations.markers)} annotation marker(s)")
    return annotations


def build_hoare_spec(
    unit: SourceUnit,
    annotations: Annotations,
    pre: Optional[str] = None,
    post: Optional[str] = None,
    post_vars: Optional[Iterable[str]] = None
) -> HoareSpec:
    """
    Combine in-file annotations with caller-supplied conditions

    A supplied post-condition replaces the in-file one; a supplied
    pre-condition is conjoined with the in-file ones.

    Raises:
        NoPostConditionError: If no post-condition is available
    """
    post_text = (post or '').strip() or (annotations.post[0] if annotations.post else None)
    if not post_text:
        raise NoPostConditionError(unit.file_id)

    pre_parts = [p for p in annotations.pre + [(pre or '').strip()] if p and p != DEFAULT_PRE]
    pre_text = get_adapter(unit.language).conjoin(pre_parts) if pre_parts else DEFAULT_PRE
    variables = tuple(post_vars) if post_vars else None
    return HoareSpec(pre=pre_text, post=post_text, post_vars=variables)


def select_function(
    unit: SourceUnit,
    name: Optional[str] = None,
    annotations: Optional[Annotations] = None
) -> UnifiedNode:
    """
    Region to analyse

    The named function, else the function holding a PRE marker, else the one
    holding a POST marker, else the first function, else the whole unit.

    Raises:
        ConfigurationError: If a named function does not exist
    """
    functions = unit.functions()
    if name:
        for function in functions:
            if function.name_hint == name:
                return function
        raise ConfigurationError('function', f"no function named '{name}' in {unit.file_id}")

    if annotations is not None:
        for tag in ("PRE", "POST"):
            for marker in annotations.markers:
                if marker.tag != tag:
                    continue
                holders = [f for f in functions if f.range.contains(marker.range)]
                if holders:
                    # innermost definition wins
                    return min(holders, key=lambda f: len(f.range))

    if functions:
        return functions[0]
    return unit.root
