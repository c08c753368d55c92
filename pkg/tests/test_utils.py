"""Unit tests for utils module"""

from warmrec.utils import ConsoleLogger, describe_file, format_file_size


class TestConsoleLogger:
    """Test console output routing"""

    def test_quiet_keeps_errors(self, capsys):
        logger = ConsoleLogger(quiet=True)
        logger.progress("hidden")
        logger.warning("hidden")
        logger.error("boom")
        err = capsys.readouterr().err
        assert "hidden" not in err
        assert "Error: boom" in err

    def test_success_line(self, capsys):
        ConsoleLogger().success("trained", "/tmp/out/model.json", {"sessions": 60, "rules": 4})
        assert "trained → model.json (60 sessions, 4 rules)" in capsys.readouterr().err

    def test_table(self, capsys):
        ConsoleLogger().table(["n", "precision %"], [[1, 100.0], [10, 33.333]])
        lines = capsys.readouterr().err.splitlines()
        assert lines[1].split() == ["1", "100.00"]
        assert lines[2].split() == ["10", "33.33"]
        assert len({len(line) for line in lines}) == 1


class TestFileHelpers:
    """Test size formatting and file descriptions"""

    def test_format_file_size(self):
        assert format_file_size(512) == "512.0 B"
        assert format_file_size(1536) == "1.5 KB"
        assert format_file_size(3 * 1024 ** 3) == "3.0 GB"

    def test_describe_file(self, tmp_path):
        path = tmp_path / "access.log"
        path.write_text("x" * 2048, encoding="utf-8")
        assert describe_file(str(path)) == "access.log (2.0 KB)"
        assert describe_file(str(tmp_path)) is None
        assert describe_file(str(tmp_path / "absent.log")) is None
