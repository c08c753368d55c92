"""Centralized configuration for warmrec"""

import json
from dataclasses import dataclass, field, fields, asdict
from pathlib import Path
from typing import Tuple

# Sessionization
DEFAULT_SESSION_TIMEOUT = 1800  # seconds of inactivity that closes a session

# Weighted Apriori
DEFAULT_MIN_WSUPPORT = 0.1
DEFAULT_MIN_WCONF = 0.5
DEFAULT_MAX_ITEMSET_SIZE = 5

# Usage clustering
DEFAULT_CLUSTER_THRESHOLD = 0.5
SIMILARITY_EPSILON = 1e-9  # slack when comparing similarities to the threshold

# HITS
DEFAULT_HITS_TOLERANCE = 1e-10
DEFAULT_HITS_MAX_ITERATIONS = 1000
PRIMITIVITY_CHECK_MAX_NODES = 64  # above this, primitivity is reported as unchecked

# Online pipeline
DEFAULT_FUSION_WEIGHTS = (1 / 3, 1 / 3, 1 / 3)  # (hub, text, rec)
DEFAULT_TOP_N = 5
DEFAULT_SEED_SIZE = 10
DEFAULT_DISSIMILARITY_FORM = "scaled"  # (2*delta)^2; "plain" is 2*delta^2
DISSIMILARITY_FORMS = ("scaled", "plain")

# Evaluation
DEFAULT_PREFIX_FRACTION = 0.5

# Model persistence
MODEL_FORMAT_VERSION = 1

# Log filtering
DEFAULT_EXCLUDED_SUFFIXES = (
    ".png", ".jpg", ".jpeg", ".gif", ".bmp", ".ico", ".svg", ".webp",
    ".css", ".js", ".map", ".woff", ".woff2", ".ttf", ".eot",
)
DEFAULT_USER_AGENT_DENYLIST = ("bot", "crawler", "spider", "slurp")

# Text mining
DEFAULT_STOPWORDS = frozenset({
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "from",
    "has", "have", "in", "is", "it", "its", "of", "on", "or", "that", "the",
    "this", "to", "was", "were", "will", "with",
})

# Server
DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8080


@dataclass
class Config:
    """Every tunable of the train/recommend/evaluate pipeline"""

    session_timeout_seconds: float = DEFAULT_SESSION_TIMEOUT
    min_wsupport: float = DEFAULT_MIN_WSUPPORT
    min_wconf: float = DEFAULT_MIN_WCONF
    max_itemset_size: int = DEFAULT_MAX_ITEMSET_SIZE
    cluster_threshold: float = DEFAULT_CLUSTER_THRESHOLD
    hits_tolerance: float = DEFAULT_HITS_TOLERANCE
    hits_max_iterations: int = DEFAULT_HITS_MAX_ITERATIONS
    fusion_weights: Tuple[float, float, float] = DEFAULT_FUSION_WEIGHTS
    top_n: int = DEFAULT_TOP_N
    seed_size: int = DEFAULT_SEED_SIZE
    dissimilarity_form: str = DEFAULT_DISSIMILARITY_FORM
    prefix_fraction: float = DEFAULT_PREFIX_FRACTION
    excluded_suffixes: Tuple[str, ...] = DEFAULT_EXCLUDED_SUFFIXES
    user_agent_denylist: Tuple[str, ...] = DEFAULT_USER_AGENT_DENYLIST
    stopwords: Tuple[str, ...] = field(default_factory=lambda: tuple(sorted(DEFAULT_STOPWORDS)))

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        """
        Build a config from a mapping of overrides

        Args:
            data: Keys named like the Config fields

        Returns:
            Config with defaults for missing keys

        Raises:
            ConfigError: If a key is unknown
        """
        from .validators import ConfigError

        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")

        values = dict(data)
        for name in ("fusion_weights", "excluded_suffixes", "user_agent_denylist", "stopwords"):
            if name in values:
                values[name] = tuple(values[name])
        return cls(**values)

    @classmethod
    def from_file(cls, path: str) -> "Config":
        """
        Load overrides from a JSON config file

        Raises:
            OSError: If the file cannot be read
            ConfigError: If the content is not a JSON object of known keys
        """
        from .validators import ConfigError

        with open(Path(path), "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"Config file is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError("Config file must contain a JSON object")
        return cls.from_dict(data)

    def replace(self, **overrides) -> "Config":
        """Copy with the non-None overrides applied"""
        values = asdict(self)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Config.from_dict(values)

    def to_dict(self) -> dict:
        values = asdict(self)
        for name in ("fusion_weights", "excluded_suffixes", "user_agent_denylist", "stopwords"):
            values[name] = list(values[name])
        return values
