"""
Slicing criterion derivation

Turns a post-condition into the set of variables the backward slice is
taken against. Explicit post_vars win; code-like posts contribute their
identifiers; natural-language posts are matched word by word against the
unit's symbols and variables. When nothing matches, every assigned
variable is used and the report says so.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Set

from models.cfg_graph import Cfg
from models.hoare import HoareSpec
from models.mini_ast import INPUT_CHANNEL, OUTPUT_CHANNEL
from models.unified_ast import SourceUnit
from utils.helpers import identifiers_in, member_names_in
from utils.logger import get_logger, log_function_call

logger = get_logger(__name__)

SOURCE_POST_VARS = "post_vars"
SOURCE_CODE = "code"
SOURCE_NATURAL_LANGUAGE = "natural_language"
SOURCE_FALLBACK = "fallback"

_OPERATOR = re.compile(r'[=<>!()\[\]+\-*/%&|^]|\.\w')
_WORD = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
_STOP_WORDS = frozenset({
    "a", "an", "and", "are", "as", "at", "be", "by", "for", "if", "in", "is",
    "it", "not", "of", "on", "or", "the", "then", "to", "was", "when", "with",
})
_OUTPUT_WORDS = frozenset({"output", "outputs", "printed", "written"})
_MIN_PREFIX = 3


@dataclass(frozen=True)
class Criterion:
    """
    Derived slicing criterion

    Attributes:
        variables: Identifiers the slice is taken against
        fields: Member names mentioned by the post-condition (recorded only)
        source: post_vars, code, natural_language or fallback
        warning: Set when the fallback was used
    """
    variables: FrozenSet[str]
    fields: FrozenSet[str] = field(default_factory=frozenset)
    source: str = SOURCE_CODE
    warning: Optional[str] = None

    def to_dict(self) -> Dict:
        return {
            "variables": sorted(self.variables),
            "fields": sorted(self.fields),
            "source": self.source,
            "warning": self.warning,
        }


def is_natural_language(text: str) -> bool:
    """True when a condition reads as prose rather than an expression"""
    if _OPERATOR.search(text):
        return False
    return len(_WORD.findall(text)) >= 2


def _program_names(unit: SourceUnit, cfg: Optional[Cfg]):
    """(variables, assigned variables, declared symbols) of the analysed region"""
    variables: Set[str] = set()
    assigned: Set[str] = set()
    if cfg is not None:
        effects = [(node.defs, node.uses) for node in cfg.nodes]
        if cfg.region is not None:
            variables.update(cfg.region.params)
    else:
        effects = [(e.defs, e.uses) for e in unit.effects.values()]
        for function in unit.functions():
            variables.update(function.params)
    for defs, uses in effects:
        variables.update(defs)
        variables.update(uses)
        assigned.update(defs)
    symbols = set(unit.symbol_index)
    return variables, assigned, symbols


def _matches(word: str, name: str) -> bool:
    if word == name:
        return True
    return len(name) >= _MIN_PREFIX and word.startswith(name)


def _natural_language_names(text: str, candidates: Iterable[str]) -> Set[str]:
    words = [w.lower() for w in _WORD.findall(text) if w.lower() not in _STOP_WORDS]
    found = set()
    for name in candidates:
        if name.startswith("<"):
            continue
        if any(_matches(word, name.lower()) for word in words):
            found.add(name)
    return found


def criterion_for(spec: HoareSpec, unit: SourceUnit, cfg: Optional[Cfg] = None) -> Criterion:
    """
    Criterion with its derivation details

    Args:
        spec: Hoare triple (post must be non-empty)
        unit: Parsed unit
        cfg: Graph of the analysed region (restricts names to that region)

    Returns:
        Criterion

    Example:
        criterion_for(HoareSpec("true", "db->key != NULL"), unit).fields -> {"key"}
    """
    if spec.post_vars:
        return Criterion(frozenset(spec.post_vars), frozenset(member_names_in(spec.post)), SOURCE_POST_VARS)

    variables, assigned, symbols = _program_names(unit, cfg)
    known = variables | symbols
    post = spec.post

    if is_natural_language(post):
        source = SOURCE_NATURAL_LANGUAGE
        found = _natural_language_names(post, known)
        words = {w.lower() for w in _WORD.findall(post)}
        if words & _OUTPUT_WORDS and OUTPUT_CHANNEL in variables:
            found.add(OUTPUT_CHANNEL)
        fields: FrozenSet[str] = frozenset()
    else:
        source = SOURCE_CODE
        found = {name for name in identifiers_in(post, include_members=False) if name in known}
        fields = frozenset(member_names_in(post))

    if found:
        logger.debug(f"Criterion from {source} post-condition: {sorted(found)}")
        return Criterion(frozenset(found), fields, source)

    fallback = frozenset(name for name in assigned if name not in (INPUT_CHANNEL, OUTPUT_CHANNEL))
    warning = f"post-condition '{post}' names no program variable; slicing against all {len(fallback)} assigned variable(s)"
    logger.warning(warning)
    return Criterion(fallback, fields, SOURCE_FALLBACK, warning)


@log_function_call
def derive_criterion(spec: HoareSpec, unit: SourceUnit, cfg: Optional[Cfg] = None) -> FrozenSet[str]:
    """Identifiers of the slicing criterion (see criterion_for)"""
    return criterion_for(spec, unit, cfg).variables
