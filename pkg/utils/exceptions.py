"""
Custom Exception Hierarchy for the slice-and-ask analysis engine

Every exception carries a formatted message, a details dict for reports and
an exit code used by the command line.
"""

from typing import Any, Optional


class SymExeException(Exception):
    """Base exception for all analysis errors"""

    exit_code = 1

    def __init__(self, message: str, details: dict = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ConfigurationError(SymExeException):
    """Raised when configuration is missing or invalid"""

    def __init__(self, config_key: str, reason: str):
        self.config_key = config_key
        self.reason = reason
        super().__init__(
            f"Configuration error for '{config_key}': {reason}",
            {"config_key": config_key, "reason": reason}
        )


class AnnotationConflictError(ConfigurationError):
    """Raised when a unit carries several different POST markers"""

    def __init__(self, posts: list):
        self.posts = list(posts)
        super().__init__(
            "POST",
            f"conflicting post-conditions in one unit: {', '.join(repr(p) for p in posts)}"
        )


class OracleConfigurationError(ConfigurationError):
    """Raised when no usable oracle (endpoint or mock) is configured"""

    exit_code = 4


class ValidationError(SymExeException):
    """Raised when input validation fails"""

    def __init__(self, field: str, value: Any, reason: str):
        self.field = field
        self.value = value
        self.reason = reason
        super().__init__(
            f"Validation error for field '{field}': {reason}",
            {"field": field, "value": str(value), "reason": reason}
        )


class MiniSyntaxError(SymExeException):
    """Raised by the mini-language parser"""

    exit_code = 3

    def __init__(self, reason: str, line: int, column: int):
        self.reason = reason
        self.line = line
        self.column = column
        super().__init__(
            f"Syntax error at line {line}, column {column}: {reason}",
            {"reason": reason, "line": line, "column": column}
        )


class SourceParseError(SymExeException):
    """Raised when a unit cannot be parsed well enough to analyse"""

    exit_code = 3

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(
            f"Cannot parse '{path}': {reason}",
            {"path": path, "reason": reason}
        )


class SourceReadError(SymExeException):
    """Raised when an input file cannot be read"""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(
            f"Cannot read '{path}': {reason}",
            {"path": path, "reason": reason}
        )


class UnknownLanguageError(SymExeException):
    """Raised when no grammar adapter is registered for a language tag"""

    def __init__(self, language: str, known: Optional[list] = None):
        self.language = language
        self.known = sorted(known or [])
        super().__init__(
            f"No grammar adapter registered for language '{language}'",
            {"language": language, "known": self.known}
        )


class NoPostConditionError(SymExeException):
    """Raised when neither the unit nor the caller supplies a post-condition"""

    def __init__(self, unit: str = ""):
        self.unit = unit
        super().__init__(
            f"no post-condition for '{unit}'" if unit else "no post-condition",
            {"unit": unit}
        )


class EvaluationError(SymExeException):
    """Raised while evaluating a mini-language expression"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Evaluation error: {reason}", {"reason": reason})


class RenderError(SymExeException):
    """Raised when slice rendering violates its invariants"""

    def __init__(self, reason: str, text: str = ""):
        self.reason = reason
        self.text = text
        super().__init__(
            f"Render error: {reason}",
            {"reason": reason, "text": text}
        )


class CoverageExplosionError(SymExeException):
    """Raised when the brute-force coverage enumerator exceeds its budget"""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(
            f"Coverage enumeration exceeded walk budget of {budget} steps",
            {"budget": budget}
        )


class MockScriptError(SymExeException):
    """Raised when the scripted oracle is asked about an unknown slice"""

    def __init__(self, fingerprint: str):
        self.fingerprint = fingerprint
        super().__init__(
            f"Mock oracle has no scripted outcome for slice {fingerprint}",
            {"fingerprint": fingerprint}
        )


class StorageException(SymExeException):
    """Raised when report or slice export fails"""

    def __init__(self, operation: str, message: str, details: dict = None):
        self.operation = operation
        super().__init__(f"Storage error during {operation}: {message}", details)
