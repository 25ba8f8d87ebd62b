"""
Unified AST Models

Language-agnostic syntax tree shared by every grammar adapter. Nodes carry
byte ranges into the original source, a small fixed kind taxonomy and an
optional role describing their slot inside the parent.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple


class NodeKind(str, Enum):
    """Syntactic categories shared by all languages"""
    FUNCTION_DEF = "function_def"
    IF = "if"
    WHILE = "while"
    FOR = "for"
    ASSIGNMENT = "assignment"
    CALL = "call"
    RETURN = "return"
    ASSUME = "assume"
    BLOCK = "block"
    CONDITION = "condition"
    DECLARATION = "declaration"
    COMMENT = "comment"
    OTHER = "other"


# Roles a child can play inside its parent
ROLE_CONDITION = "condition"
ROLE_THEN = "then"
ROLE_ELSE = "else"
ROLE_BODY = "body"
ROLE_INIT = "init"
ROLE_UPDATE = "update"
ROLE_ERROR = "error"
ROLE_SKIP = "skip"
ROLE_ASSERT = "assert"
ROLE_COMPOUND = "compound"
ROLE_PASS = "pass"
ROLE_JUMP = "jump"


@dataclass(frozen=True)
class SourceRange:
    """Byte range [start, end) inside one source file"""
    file_id: str
    start: int
    end: int

    def contains(self, other: 'SourceRange') -> bool:
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other: 'SourceRange') -> bool:
        return self.start < other.end and other.start < self.end

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True, eq=False)
class UnifiedNode:
    """
    Node of the unified AST

    Nodes compare and hash by identity so they can key side tables
    (effects, CFG back-references) without colliding on equal ranges.

    Attributes:
        kind: Syntactic category
        range: Byte range in the original source
        children: Ordered, non-overlapping children
        name_hint: Declared or called name
        role: Slot inside the parent (condition, then, else, body, ...)
        params: Parameter names of a function definition
        is_error: True for regions the grammar could not parse
    """
    kind: NodeKind
    range: SourceRange
    children: Tuple['UnifiedNode', ...] = ()
    name_hint: Optional[str] = None
    role: Optional[str] = None
    params: Tuple[str, ...] = ()
    is_error: bool = False

    @property
    def start(self) -> int:
        return self.range.start

    @property
    def end(self) -> int:
        return self.range.end

    def child_with_role(self, role: str) -> Optional['UnifiedNode']:
        for child in self.children:
            if child.role == role:
                return child
        return None

    def walk(self) -> Iterator['UnifiedNode']:
        """Pre-order traversal"""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def __repr__(self) -> str:
        name = f" {self.name_hint}" if self.name_hint else ""
        role = f" role={self.role}" if self.role else ""
        return f"<UnifiedNode {self.kind.value}{name}{role} [{self.start}:{self.end})>"


@dataclass(frozen=True)
class StatementEffects:
    """
    Approximate data effects of a statement or condition

    Attributes:
        defs: Identifiers possibly written
        uses: Identifiers possibly read
        calls: Names of called functions
        opaque: True when the effects cannot be trusted (always kept by the slicer)
        exits: True when control leaves the analysed function
    """
    defs: FrozenSet[str] = frozenset()
    uses: FrozenSet[str] = frozenset()
    calls: FrozenSet[str] = frozenset()
    opaque: bool = False
    exits: bool = False


NO_EFFECTS = StatementEffects()

# Kinds that become CFG statement nodes (declarations only with role init)
EXECUTABLE_KINDS = frozenset({
    NodeKind.ASSIGNMENT, NodeKind.CALL, NodeKind.RETURN, NodeKind.ASSUME, NodeKind.OTHER,
})
STRUCTURED_KINDS = frozenset({NodeKind.IF, NodeKind.WHILE, NodeKind.FOR})


def is_executable(node: UnifiedNode) -> bool:
    """True for nodes lowered to a single CFG statement"""
    if node.kind in EXECUTABLE_KINDS:
        return True
    return node.kind == NodeKind.DECLARATION and node.role == ROLE_INIT


@dataclass(frozen=True)
class SourceUnit:
    """
    Parsed source file

    Attributes:
        file_id: Path or label of the file
        raw_bytes: Original bytes
        language: Language tag of the adapter that parsed it
        root: Root BLOCK node spanning the file
        symbol_index: Declaration nodes keyed by name
        effects: Effects of executable statements and conditions
        comments: Every comment in the file, in source order
        errors: Parse diagnostics (empty for a clean parse)
    """
    file_id: str
    raw_bytes: bytes
    language: str
    root: UnifiedNode
    symbol_index: Mapping[str, Tuple[UnifiedNode, ...]] = field(default_factory=dict, hash=False)
    effects: Mapping[UnifiedNode, StatementEffects] = field(default_factory=dict, hash=False)
    comments: Tuple[UnifiedNode, ...] = ()
    errors: Tuple[str, ...] = ()

    @property
    def text(self) -> str:
        return self.raw_bytes.decode('utf-8', errors='replace')

    def source(self, node: UnifiedNode) -> bytes:
        return self.raw_bytes[node.start:node.end]

    def source_text(self, node: UnifiedNode) -> str:
        return self.source(node).decode('utf-8', errors='replace')

    def effects_of(self, node: UnifiedNode) -> StatementEffects:
        return self.effects.get(node, NO_EFFECTS)

    def parent_map(self) -> Dict[UnifiedNode, UnifiedNode]:
        parents: Dict[UnifiedNode, UnifiedNode] = {}
        for node in self.root.walk():
            for child in node.children:
                parents[child] = node
        return parents

    def functions(self) -> List[UnifiedNode]:
        return [node for node in self.root.walk() if node.kind == NodeKind.FUNCTION_DEF]


def build_symbol_index(root: UnifiedNode) -> Dict[str, Tuple[UnifiedNode, ...]]:
    """Map every named declaration (and function definition) to its nodes"""
    index: Dict[str, List[UnifiedNode]] = {}
    for node in root.walk():
        if node.kind in (NodeKind.DECLARATION, NodeKind.FUNCTION_DEF) and node.name_hint:
            index.setdefault(node.name_hint, []).append(node)
    return {name: tuple(nodes) for name, nodes in index.items()}


def check_ranges(root: UnifiedNode) -> List[str]:
    """
    Range containment and sibling ordering violations (empty when well formed)
    """
    problems: List[str] = []
    for node in root.walk():
        previous_end = node.start
        for child in node.children:
            if not node.range.contains(child.range):
                problems.append(f"{child!r} escapes {node!r}")
            if child.start < previous_end:
                problems.append(f"{child!r} overlaps or precedes its left sibling in {node!r}")
            previous_end = child.end
    return problems
