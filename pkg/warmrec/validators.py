"""Error types and validation for warmrec inputs and configuration"""

import math
from typing import Optional

from . import config as defaults


class ValidationError(Exception):
    """Invalid data or configuration"""
    pass


class ConfigError(ValidationError):
    """Configuration value out of its documented range"""
    pass


class LogParseError(ValidationError):
    """Malformed access-log or session-CSV record"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptyUsageError(ValidationError):
    """No usable sessions or visits"""

    def __init__(self, message: str = "empty usage data"):
        super().__init__(message)


class ModelFormatError(ValidationError):
    """Corrupt model file or unsupported format version"""
    pass


class SynthSpecError(ValidationError):
    """Inconsistent synthetic-data blueprint"""
    pass


class ConfigValidator:
    """Range checks for Config values"""

    @staticmethod
    def validate_fraction(name: str, value: float, allow_zero: bool = False) -> None:
        """
        Check a threshold lies in (0, 1], or [0, 1] when allow_zero

        Raises:
            ConfigError: If the value is out of range
        """
        if not isinstance(value, (int, float)) or math.isnan(value):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        lower_ok = value >= 0 if allow_zero else value > 0
        if not lower_ok or value > 1:
            interval = "[0, 1]" if allow_zero else "(0, 1]"
            raise ConfigError(f"{name} must be in {interval}, got {value}")

    @staticmethod
    def validate_positive(name: str, value: float, integer: bool = False) -> None:
        if integer and (not isinstance(value, int) or isinstance(value, bool)):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        if not isinstance(value, (int, float)) or not value > 0:
            raise ConfigError(f"{name} must be positive, got {value!r}")

    @staticmethod
    def validate_fusion_weights(weights) -> None:
        if len(weights) != 3:
            raise ConfigError(f"fusion_weights must have 3 entries, got {len(weights)}")
        if any(w < 0 for w in weights):
            raise ConfigError(f"fusion_weights must be nonnegative, got {list(weights)}")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise ConfigError(f"fusion_weights must sum to 1, got {sum(weights)}")

    @classmethod
    def validate(cls, cfg: "defaults.Config") -> "defaults.Config":
        """
        Validate a complete Config

        Args:
            cfg: Config to check

        Returns:
            The same config, for chaining

        Raises:
            ConfigError: On the first out-of-range value
        """
        cls.validate_positive("session_timeout_seconds", cfg.session_timeout_seconds)
        cls.validate_fraction("min_wsupport", cfg.min_wsupport)
        cls.validate_fraction("min_wconf", cfg.min_wconf)
        cls.validate_positive("max_itemset_size", cfg.max_itemset_size, integer=True)
        cls.validate_fraction("cluster_threshold", cfg.cluster_threshold, allow_zero=True)
        cls.validate_positive("hits_tolerance", cfg.hits_tolerance)
        cls.validate_positive("hits_max_iterations", cfg.hits_max_iterations, integer=True)
        cls.validate_fusion_weights(cfg.fusion_weights)
        cls.validate_positive("top_n", cfg.top_n, integer=True)
        cls.validate_positive("seed_size", cfg.seed_size, integer=True)

        if cfg.dissimilarity_form not in defaults.DISSIMILARITY_FORMS:
            raise ConfigError(
                f"dissimilarity_form must be one of {', '.join(defaults.DISSIMILARITY_FORMS)}, "
                f"got {cfg.dissimilarity_form!r}"
            )
        if not 0 < cfg.prefix_fraction < 1:
            raise ConfigError(f"prefix_fraction must be in (0, 1), got {cfg.prefix_fraction}")

        return cfg
