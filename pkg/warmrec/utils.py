"""Console output and file helpers for the warmrec command line"""

import logging
import sys
from pathlib import Path
from typing import Iterable, Mapping, Optional

SIZE_UNITS = ("B", "KB", "MB", "GB", "TB")


def setup_logging(quiet: bool = False, debug: bool = False) -> None:
    """Route library loggers to stderr: DEBUG with --debug, WARNING with --quiet, else INFO"""
    level = logging.DEBUG if debug else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("warmrec").setLevel(level)


class ConsoleLogger:
    """User-facing progress lines on stderr; results go to stdout or files"""

    def __init__(self, quiet: bool = False, debug: bool = False):
        """
        Args:
            quiet: Suppress everything except errors
            debug: Also show library DEBUG records
        """
        self.quiet = quiet
        self.debug = debug
        setup_logging(quiet, debug)

    def _emit(self, text: str, always: bool = False) -> None:
        if always or not self.quiet:
            print(text, file=sys.stderr)

    def error(self, message: str) -> None:
        self._emit(f"Error: {message}", always=True)

    def warning(self, message: str) -> None:
        self._emit(f"Warning: {message}")

    def progress(self, message: str) -> None:
        self._emit(f"  {message}")

    def success(self, action: str, dest: Optional[str], counts: Mapping[str, int]) -> None:
        """
        One-line summary, e.g. ``✅ trained → model.json (60 sessions, 12 pages)``

        Args:
            action: What was done
            dest: Output path (only its name is shown)
            counts: Named counts, shown in insertion order
        """
        summary = ", ".join(f"{value} {name}" for name, value in counts.items())
        target = Path(dest).name if dest else "-"
        self._emit(f"✅ {action} → {target} ({summary})")

    def table(self, header: Iterable[str], rows: Iterable[Iterable]) -> None:
        """Fixed-width table, used for the evaluation summary"""
        header = list(header)
        lines = [header] + [[f"{v:.2f}" if isinstance(v, float) else str(v) for v in row] for row in rows]
        widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
        for line in lines:
            self._emit("  " + "  ".join(cell.rjust(width) for cell, width in zip(line, widths)))


def format_file_size(size_bytes: float) -> str:
    """Human-readable size, e.g. 1536 -> "1.5 KB" """
    unit = 0
    while size_bytes >= 1024 and unit < len(SIZE_UNITS) - 1:
        size_bytes /= 1024
        unit += 1
    return f"{size_bytes:.1f} {SIZE_UNITS[unit]}"


def describe_file(path: str) -> Optional[str]:
    """``name (size)`` for an existing regular file, None otherwise"""
    source = Path(path)
    if not source.is_file():
        return None
    return f"{source.name} ({format_file_size(source.stat().st_size)})"
