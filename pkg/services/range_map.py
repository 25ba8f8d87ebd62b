"""
Range map

Sorted collection of rewrite directives over byte ranges of one source
text. Directives form a laminar family: any two are disjoint or nested.
Rendering a window emits the text between directives verbatim and applies
only the outermost directives inside it; a REPLACE is expected to carry the
already-rendered text of whatever it encloses.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Tuple

from sortedcontainers import SortedKeyList

from utils.exceptions import RenderError

# Left by DELETE so that lines emptied by deletions can be dropped afterwards
DELETED = "\x00"


class DirectiveKind(str, Enum):
    """What happens to a range when rendering"""
    EMIT = "emit"
    DELETE = "delete"
    REPLACE = "replace"


@dataclass(frozen=True)
class Directive:
    start: int
    end: int
    kind: DirectiveKind
    text: str = ""

    @property
    def is_insertion(self) -> bool:
        return self.start == self.end

    def encloses(self, other: 'Directive') -> bool:
        if other.is_insertion:
            return self.start < other.start < self.end
        return self.start <= other.start and other.end <= self.end

    def crosses(self, other: 'Directive') -> bool:
        """Partial overlap (neither disjoint nor nested)"""
        if self.is_insertion or other.is_insertion:
            return False
        disjoint = self.end <= other.start or other.end <= self.start
        return not disjoint and not self.encloses(other) and not other.encloses(self)


def _order(directive: Directive) -> Tuple[int, int, int]:
    # insertions first at equal starts, then enclosing ranges before enclosed ones
    return directive.start, 0 if directive.is_insertion else 1, -directive.end


class RangeMap:
    """Laminar set of DELETE / REPLACE directives over one text"""

    def __init__(self):
        self._directives = SortedKeyList(key=_order)

    def __len__(self) -> int:
        return len(self._directives)

    def __iter__(self) -> Iterator[Directive]:
        return iter(self._directives)

    def delete(self, start: int, end: int) -> None:
        if start == end:
            return
        self.add(Directive(start, end, DirectiveKind.DELETE))

    def replace(self, start: int, end: int, text: str) -> None:
        self.add(Directive(start, end, DirectiveKind.REPLACE, text))

    def insert(self, position: int, text: str) -> None:
        self.add(Directive(position, position, DirectiveKind.REPLACE, text))

    def add(self, directive: Directive) -> None:
        if directive.start > directive.end:
            raise RenderError(f"inverted range [{directive.start}, {directive.end})")
        if directive.kind == DirectiveKind.EMIT:
            raise RenderError("verbatim text needs no directive")
        for other in self._directives.irange_key(max_key=(directive.end, 1, 0)):
            if other.crosses(directive):
                raise RenderError(
                    f"directive [{directive.start}, {directive.end}) partially overlaps "
                    f"[{other.start}, {other.end})"
                )
            if (other.start, other.end) == (directive.start, directive.end) and not directive.is_insertion:
                raise RenderError(f"range [{directive.start}, {directive.end}) already has a directive")
        self._directives.add(directive)

    def is_laminar(self) -> bool:
        items = list(self._directives)
        return not any(a.crosses(b) for i, a in enumerate(items) for b in items[i + 1:])

    def segments(self, start: int, end: int) -> List[Directive]:
        """
        Outermost directives inside [start, end) plus EMIT segments for the gaps

        Returns:
            Directives covering the window left to right
        """
        out: List[Directive] = []
        cursor = start
        for directive in self._directives.irange_key(min_key=(start, 0, -end)):
            if directive.start > end:
                break
            if directive.end > end or directive.start < cursor:
                # outside the window, or nested in a directive already emitted
                continue
            if directive.start > cursor:
                out.append(Directive(cursor, directive.start, DirectiveKind.EMIT))
            out.append(directive)
            cursor = directive.end
        if cursor < end:
            out.append(Directive(cursor, end, DirectiveKind.EMIT))
        return out

    def render(self, text: str, start: int = 0, end: int = None) -> str:
        """Raw rendering of a window (deletion sentinels left in place)"""
        if end is None:
            end = len(text)
        pieces: List[str] = []
        for segment in self.segments(start, end):
            if segment.kind == DirectiveKind.EMIT:
                pieces.append(text[segment.start:segment.end])
            elif segment.kind == DirectiveKind.DELETE:
                pieces.append(DELETED)
            else:
                pieces.append(segment.text)
        return "".join(pieces)


def cleanup(rendered: str) -> str:
    """Drop lines left empty by deletions, then the remaining sentinels"""
    lines = [
        line for line in rendered.split("\n")
        if not (DELETED in line and not line.replace(DELETED, "").strip())
    ]
    return "\n".join(lines).replace(DELETED, "")
