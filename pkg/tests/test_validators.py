"""Unit tests for validators and config modules"""

import json

import pytest
from warmrec.config import Config
from warmrec.validators import (
    ConfigError,
    ConfigValidator,
    EmptyUsageError,
    LogParseError,
    ModelFormatError,
    ValidationError,
)


class TestConfigValidator:
    """Test range checks on Config values"""

    def setup_method(self):
        self.validator = ConfigValidator()

    def test_defaults_valid(self):
        cfg = Config()
        assert self.validator.validate(cfg) is cfg

    def test_fraction_bounds(self):
        self.validator.validate_fraction("min_wconf", 1.0)
        self.validator.validate_fraction("cluster_threshold", 0.0, allow_zero=True)
        with pytest.raises(ConfigError, match=r"min_wsupport must be in \(0, 1\]"):
            self.validator.validate_fraction("min_wsupport", 0.0)
        with pytest.raises(ConfigError, match=r"cluster_threshold must be in \[0, 1\]"):
            self.validator.validate_fraction("cluster_threshold", 1.2, allow_zero=True)
        with pytest.raises(ConfigError, match="must be a number"):
            self.validator.validate_fraction("min_wconf", float("nan"))

    def test_positive_integer(self):
        with pytest.raises(ConfigError, match="must be an integer"):
            self.validator.validate_positive("seed_size", 2.5, integer=True)
        with pytest.raises(ConfigError, match="must be positive"):
            self.validator.validate_positive("top_n", 0, integer=True)

    def test_fusion_weights(self):
        self.validator.validate_fusion_weights((0.5, 0.25, 0.25))
        with pytest.raises(ConfigError, match="sum to 1"):
            self.validator.validate_fusion_weights((0.5, 0.5, 0.5))
        with pytest.raises(ConfigError, match="nonnegative"):
            self.validator.validate_fusion_weights((1.5, -0.25, -0.25))
        with pytest.raises(ConfigError, match="3 entries"):
            self.validator.validate_fusion_weights((0.5, 0.5))

    def test_dissimilarity_form(self):
        with pytest.raises(ConfigError, match="dissimilarity_form"):
            self.validator.validate(Config(dissimilarity_form="euclid"))

    def test_prefix_fraction(self):
        with pytest.raises(ConfigError, match="prefix_fraction"):
            self.validator.validate(Config(prefix_fraction=1.0))


class TestConfig:
    """Test config loading and overrides"""

    def test_replace_skips_none(self):
        cfg = Config().replace(min_wconf=0.7, min_wsupport=None)
        assert cfg.min_wconf == 0.7
        assert cfg.min_wsupport == Config().min_wsupport

    def test_from_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"fusion_weights": [0.5, 0.25, 0.25], "seed_size": 4}), encoding="utf-8")
        cfg = Config.from_file(str(path))
        assert cfg.fusion_weights == (0.5, 0.25, 0.25)
        assert cfg.seed_size == 4

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="Unknown config keys: bogus"):
            Config.from_dict({"bogus": 1})

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigError, match="JSON object"):
            Config.from_file(str(path))

    def test_dict_round_trip(self):
        cfg = Config(stopwords=("foo", "bar"), top_n=7)
        assert Config.from_dict(cfg.to_dict()) == cfg


class TestErrorTypes:
    """Test the error hierarchy"""

    def test_all_are_validation_errors(self):
        for error in (ConfigError("x"), LogParseError("x"), EmptyUsageError(), ModelFormatError("x")):
            assert isinstance(error, ValidationError)

    def test_line_number_in_message(self):
        error = LogParseError("bad record", line_number=12)
        assert str(error) == "line 12: bad record"
        assert error.line_number == 12

    def test_empty_usage_default_message(self):
        assert str(EmptyUsageError()) == "empty usage data"
