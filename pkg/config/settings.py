"""
Configuration Management for the slice-and-ask analysis engine

Loads and validates all configuration from environment variables.
Provides a singleton Settings instance for the entire application.
"""

import os
from typing import Optional
from dotenv import load_dotenv
from utils.exceptions import ConfigurationError

# Load environment variables from .env file
load_dotenv()


class Settings:
    """
    Centralized configuration management
    Loads all settings from environment variables with validation
    """

    # Singleton instance
    _instance: Optional['Settings'] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Settings, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        """Initialize settings from environment variables"""
        if self._initialized:
            return

        # Oracle endpoint (chat-completions style)
        self.LLM_ENDPOINT = self._get_optional("LLM_ENDPOINT", "")
        self.LLM_MODEL = self._get_optional("LLM_MODEL", "gpt-4o")
        # Name of the variable holding the key, never the key itself
        self.LLM_API_KEY_ENV = self._get_optional("LLM_API_KEY_ENV", "LLM_API_KEY")
        self.LLM_TEMPERATURE = self._get_float("LLM_TEMPERATURE", 0.0)
        self.LLM_MAX_RETRIES = self._get_int("LLM_MAX_RETRIES", 2)
        self.LLM_RETRY_WAIT_SECONDS = self._get_float("LLM_RETRY_WAIT_SECONDS", 1.0)
        self.LLM_TIMEOUT_SECONDS = self._get_float("LLM_TIMEOUT_SECONDS", 120.0)
        self.LLM_PARALLELISM = self._get_int("LLM_PARALLELISM", 1)
        self.LLM_BEST_OF = self._get_int("LLM_BEST_OF", 1)

        # Analysis limits
        self.MAX_PARTITIONS = self._get_int("MAX_PARTITIONS", 256)
        self.LOOP_UNFOLD_BOUND = self._get_int("LOOP_UNFOLD_BOUND", 2)
        self.STEP_BUDGET = self._get_int("STEP_BUDGET", 10000)
        self.CONTEXT_LINE_CAP = self._get_int("CONTEXT_LINE_CAP", 40)
        self.TOKENIZER = self._get_optional("TOKENIZER", "default")
        self.TIKTOKEN_ENCODING = self._get_optional("TIKTOKEN_ENCODING", "cl100k_base")

        # Scripted oracle server
        self.MOCK_SERVER_HOST = self._get_optional("MOCK_SERVER_HOST", "127.0.0.1")
        self.MOCK_SERVER_PORT = self._get_int("MOCK_SERVER_PORT", 5005)

        # Logging Configuration
        self.LOG_LEVEL = self._get_optional("LOG_LEVEL", "WARNING")
        self.LOG_FILE = self._get_optional("LOG_FILE", "")
        self.ERROR_LOG_FILE = self._get_optional("ERROR_LOG_FILE", "")

        # Report format
        self.REPORT_SCHEMA_VERSION = self._get_optional("REPORT_SCHEMA_VERSION", "1.0")

        self._initialized = True

    def _get_optional(self, key: str, default: str) -> str:
        """Get optional environment variable with default value"""
        return os.getenv(key, default)

    def _get_int(self, key: str, default: int) -> int:
        """Get integer environment variable with default value"""
        value = os.getenv(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise ConfigurationError(
                key,
                f"Value '{value}' is not a valid integer"
            )

    def _get_float(self, key: str, default: float) -> float:
        """Get float environment variable with default value"""
        value = os.getenv(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise ConfigurationError(
                key,
                f"Value '{value}' is not a valid number"
            )

    def validate(self) -> tuple[bool, list[str]]:
        """
        Validate configuration settings
        Returns: (is_valid, list_of_errors)
        """
        errors = []

        valid_log_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if self.LOG_LEVEL.upper() not in valid_log_levels:
            errors.append(f"LOG_LEVEL must be one of: {', '.join(valid_log_levels)}")

        if self.LLM_TEMPERATURE < 0:
            errors.append("LLM_TEMPERATURE must not be negative")

        if self.LLM_MAX_RETRIES < 0:
            errors.append("LLM_MAX_RETRIES must not be negative")

        if self.LLM_PARALLELISM < 1:
            errors.append("LLM_PARALLELISM must be positive")

        if self.LLM_BEST_OF < 1:
            errors.append("LLM_BEST_OF must be positive")

        if self.MAX_PARTITIONS < 1:
            errors.append("MAX_PARTITIONS must be positive")

        if self.LOOP_UNFOLD_BOUND < 0:
            errors.append("LOOP_UNFOLD_BOUND must not be negative")

        if self.STEP_BUDGET < 1:
            errors.append("STEP_BUDGET must be positive")

        if self.CONTEXT_LINE_CAP < 1:
            errors.append("CONTEXT_LINE_CAP must be positive")

        if self.MOCK_SERVER_PORT < 1 or self.MOCK_SERVER_PORT > 65535:
            errors.append("MOCK_SERVER_PORT must be between 1 and 65535")

        if self.TOKENIZER not in ('default', 'tiktoken'):
            errors.append("TOKENIZER must be 'default' or 'tiktoken'")

        return len(errors) == 0, errors

    def to_dict(self) -> dict:
        """Convert settings to dictionary (echoed into analysis reports)"""
        return {
            "LLM_ENDPOINT": self.LLM_ENDPOINT,
            "LLM_MODEL": self.LLM_MODEL,
            "LLM_API_KEY_ENV": self.LLM_API_KEY_ENV,
            "LLM_TEMPERATURE": self.LLM_TEMPERATURE,
            "LLM_MAX_RETRIES": self.LLM_MAX_RETRIES,
            "LLM_PARALLELISM": self.LLM_PARALLELISM,
            "LLM_BEST_OF": self.LLM_BEST_OF,
            "MAX_PARTITIONS": self.MAX_PARTITIONS,
            "CONTEXT_LINE_CAP": self.CONTEXT_LINE_CAP,
            "TOKENIZER": self.TOKENIZER,
            "LOG_LEVEL": self.LOG_LEVEL,
        }

    def __repr__(self) -> str:
        return f"<Settings(model={self.LLM_MODEL}, tokenizer={self.TOKENIZER})>"


# Global settings instance
settings = Settings()
