"""
Token counting

The built-in tokenizer splits on word and punctuation boundaries (multi-
character operators count once). With TOKENIZER=tiktoken the counts come
from a byte-pair encoding instead; every reported count names its tokenizer.
"""

import re
import threading
from typing import Callable, Dict, Optional

from config.settings import settings
from utils.exceptions import ConfigurationError
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TOKENIZER = "default"
_TOKEN_PATTERN = re.compile(r"\w+|:=|<=|>=|==|!=|&&|\|\||->|[^\w\s]")


class Tokenizer:
    """Named token counter"""

    def __init__(self, name: str, counter: Callable[[str], int]):
        self.name = name
        self._counter = counter

    def count(self, text: str) -> int:
        if not text:
            return 0
        return self._counter(text)

    def __repr__(self) -> str:
        return f"<Tokenizer(name={self.name})>"


def _default_counter(text: str) -> int:
    return sum(1 for _ in _TOKEN_PATTERN.finditer(text))


def _tiktoken_tokenizer(encoding_name: str) -> Tokenizer:
    try:
        import tiktoken
    except ImportError as e:
        raise ConfigurationError("TOKENIZER", f"tiktoken is not installed ({e})")
    encoding = tiktoken.get_encoding(encoding_name)
    return Tokenizer(f"tiktoken:{encoding_name}", lambda text: len(encoding.encode(text)))


_cache: Dict[str, Tokenizer] = {}
_lock = threading.Lock()


def get_tokenizer(name: Optional[str] = None) -> Tokenizer:
    """
    Tokenizer by name ('default' or 'tiktoken'; settings.TOKENIZER when omitted)

    Raises:
        ConfigurationError: Unknown name, or tiktoken requested but missing
    """
    name = name or settings.TOKENIZER
    with _lock:
        if name not in _cache:
            if name == DEFAULT_TOKENIZER:
                _cache[name] = Tokenizer(DEFAULT_TOKENIZER, _default_counter)
            elif name == "tiktoken":
                _cache[name] = _tiktoken_tokenizer(settings.TIKTOKEN_ENCODING)
                logger.info(f"Using {_cache[name].name} for token counts")
            else:
                raise ConfigurationError("TOKENIZER", f"unknown tokenizer '{name}'")
        return _cache[name]


def count_tokens(text: str, tokenizer: Optional[str] = None) -> int:
    """
    Number of tokens in a text

    Example:
        count_tokens("i := i + 1") -> 5
    """
    return get_tokenizer(tokenizer).count(text)
