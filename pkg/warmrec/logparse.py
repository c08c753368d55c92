"""Access-log parsing, sessionization and raw page statistics"""

import csv
import json
import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple
from urllib.parse import urlsplit

from . import config
from .validators import LogParseError

logger = logging.getLogger(__name__)

# host ident authuser [date] "request" status bytes ["referer" "user-agent"]
CLF_PATTERN = re.compile(
    r'^(?P<host>\S+) \S+ \S+ \[(?P<time>[^\]]+)\] "(?P<request>[^"]*)" '
    r'(?P<status>\d{3}|-) (?P<bytes>\d+|-)'
    r'(?: "(?P<referer>[^"]*)" "(?P<agent>[^"]*)")?\s*$'
)
CLF_TIME_FORMAT = "%d/%b/%Y:%H:%M:%S %z"


@dataclass(frozen=True)
class RawLogEntry:
    client_key: str
    page: str
    timestamp: float
    bytes: Optional[int] = None
    status: Optional[int] = None
    user_agent: str = ""


@dataclass(frozen=True)
class Visit:
    page: str
    timestamp: float
    dwell_seconds: float


@dataclass(frozen=True)
class Session:
    session_id: str
    visits: Tuple[Visit, ...]

    @property
    def pages(self) -> FrozenSet[str]:
        return frozenset(v.page for v in self.visits)

    @property
    def page_sequence(self) -> List[str]:
        return [v.page for v in self.visits]


@dataclass(frozen=True)
class SessionLog:
    sessions: Tuple[Session, ...]
    page_universe: FrozenSet[str]

    @classmethod
    def from_sessions(cls, sessions: Iterable[Session]) -> "SessionLog":
        sessions = tuple(sessions)
        universe = frozenset(v.page for s in sessions for v in s.visits)
        return cls(sessions=sessions, page_universe=universe)

    def __len__(self) -> int:
        return len(self.sessions)

    @property
    def visit_count(self) -> int:
        return sum(len(s.visits) for s in self.sessions)


@dataclass(frozen=True)
class SiteMap:
    pages: FrozenSet[str]
    size_bytes: Dict[str, int] = field(default_factory=dict)
    outlinks: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    def size_of(self, page: str) -> int:
        """Page size in bytes; unknown or non-positive sizes count as 1"""
        return max(1, self.size_bytes.get(page, 1))

    def links_of(self, page: str) -> FrozenSet[str]:
        return self.outlinks.get(page, frozenset())

    def indegree(self) -> Dict[str, int]:
        """Raw inbound-link counts for every page (zero included)"""
        counts = {p: 0 for p in self.pages}
        for source in sorted(self.outlinks):
            for target in self.outlinks[source]:
                counts[target] = counts.get(target, 0) + 1
        return counts

    @classmethod
    def empty(cls) -> "SiteMap":
        return cls(pages=frozenset())

    @classmethod
    def from_dict(cls, data: dict) -> "SiteMap":
        """
        Build a SiteMap from the JSON layout
        ``{"pages": {"<page>": {"size": <int>, "outlinks": [...]}}}``

        Outlinks to pages not listed are dropped with a warning.
        """
        if not isinstance(data, dict) or not isinstance(data.get("pages"), dict):
            raise LogParseError('SiteMap JSON must contain a "pages" object')

        entries = {}
        for page, meta in data["pages"].items():
            meta = meta or {}
            if not isinstance(meta, dict):
                raise LogParseError(f"SiteMap entry for {page!r} must be an object, got {type(meta).__name__}")
            links = meta.get("outlinks") or []
            if not isinstance(links, list) or not all(isinstance(t, str) for t in links):
                raise LogParseError(f"SiteMap outlinks for {page!r} must be a list of pages")
            entries[normalize_page(page)] = meta
        pages = frozenset(entries)
        sizes = {}
        outlinks = {}
        dangling = 0

        for page, meta in entries.items():
            size = meta.get("size")
            sizes[page] = size if isinstance(size, int) and size >= 1 else 1
            links = set()
            for target in meta.get("outlinks") or []:
                target = normalize_page(target)
                if target == page:
                    continue
                if target not in pages:
                    dangling += 1
                    continue
                links.add(target)
            outlinks[page] = frozenset(links)

        if dangling:
            logger.warning("Dropped %d sitemap links to unlisted pages", dangling)
        return cls(pages=pages, size_bytes=sizes, outlinks=outlinks)

    def covering(self, extra_pages: Iterable[str]) -> "SiteMap":
        """Canonical copy listing extra pages too, with explicit sizes and link sets"""
        pages = self.pages | frozenset(extra_pages)
        return SiteMap(
            pages=pages,
            size_bytes={p: self.size_of(p) for p in pages},
            outlinks={p: self.links_of(p) for p in pages},
        )

    def to_dict(self) -> dict:
        return {
            "pages": {
                page: {
                    "size": self.size_of(page),
                    "outlinks": sorted(self.links_of(page)),
                }
                for page in sorted(self.pages)
            }
        }


@dataclass(frozen=True)
class PageStats:
    total_dwell_seconds: float
    visit_count: int
    indegree: int
    size_bytes: int = 1


def normalize_page(raw: str) -> str:
    """
    Normalize a URL or path to a page identifier

    Drops scheme/host, query string and fragment; collapses trailing slashes.

    Raises:
        LogParseError: If nothing is left after normalization
    """
    raw = (raw or "").strip()
    path = urlsplit(raw).path if raw else ""
    if len(path) > 1:
        path = path.rstrip("/") or "/"
    if not path:
        raise LogParseError(f"Empty page after normalization: {raw!r}")
    return path


def parse_clf_line(line: str, line_number: Optional[int] = None) -> RawLogEntry:
    """
    Parse one Common (or Combined) Log Format record

    Args:
        line: Raw log line
        line_number: Position in the source file, for error context

    Returns:
        Normalized RawLogEntry

    Raises:
        LogParseError: If the line is malformed
    """
    match = CLF_PATTERN.match(line.strip())
    if not match:
        raise LogParseError(f"Malformed log line: {line.strip()[:80]!r}", line_number)

    parts = match.group("request").split()
    if len(parts) < 2:
        raise LogParseError(f"Malformed request field: {match.group('request')!r}", line_number)

    try:
        timestamp = datetime.strptime(match.group("time"), CLF_TIME_FORMAT).timestamp()
    except ValueError:
        raise LogParseError(f"Invalid timestamp: {match.group('time')!r}", line_number)
    if timestamp < 0:
        raise LogParseError(f"Timestamp before epoch: {match.group('time')!r}", line_number)

    try:
        page = normalize_page(parts[1])
    except LogParseError as e:
        raise LogParseError(str(e), line_number)

    agent = match.group("agent") or ""
    status = match.group("status")
    size = match.group("bytes")
    return RawLogEntry(
        client_key=f"{match.group('host')}|{agent}",
        page=page,
        timestamp=timestamp,
        bytes=None if size == "-" else int(size),
        status=None if status == "-" else int(status),
        user_agent=agent,
    )


def parse_clf_lines(lines: Iterable[str]) -> Tuple[List[RawLogEntry], int]:
    """
    Parse a sequence of log lines, skipping and counting malformed ones

    Returns:
        Tuple of (entries, skipped_count)
    """
    entries = []
    skipped = 0
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            entries.append(parse_clf_line(line, number))
        except LogParseError as e:
            skipped += 1
            logger.debug("Skipping %s", e)
    if skipped:
        logger.warning("Skipped %d malformed log lines", skipped)
    return entries, skipped


def read_clf_file(path: str) -> Tuple[List[RawLogEntry], int]:
    with open(Path(path), "r", encoding="utf-8", errors="replace") as f:
        return parse_clf_lines(f)


def filter_entries(entries: Iterable[RawLogEntry],
                   excluded_suffixes: Iterable[str] = config.DEFAULT_EXCLUDED_SUFFIXES,
                   user_agent_denylist: Iterable[str] = config.DEFAULT_USER_AGENT_DENYLIST,
                   ) -> Tuple[List[RawLogEntry], Dict[str, int]]:
    """
    Drop non-2xx responses, static resources and denylisted agents

    Entries without a status are kept.

    Returns:
        Tuple of (kept entries, dropped count per reason)
    """
    suffixes = tuple(s.lower() for s in excluded_suffixes)
    denylist = tuple(a.lower() for a in user_agent_denylist)
    dropped = {"status": 0, "resource": 0, "agent": 0}
    kept = []

    for entry in entries:
        if entry.status is not None and not 200 <= entry.status < 300:
            dropped["status"] += 1
        elif suffixes and entry.page.lower().endswith(suffixes):
            dropped["resource"] += 1
        elif any(token in entry.user_agent.lower() for token in denylist):
            dropped["agent"] += 1
        else:
            kept.append(entry)

    return kept, dropped


def _with_dwell(session_id: str, stamped: List[Tuple[str, float]]) -> Session:
    """Build a Session, deriving dwell from inter-visit gaps"""
    gaps = [stamped[i + 1][1] - stamped[i][1] for i in range(len(stamped) - 1)]
    last = sum(gaps) / len(gaps) if gaps else 0.0
    dwells = gaps + [last]
    visits = tuple(Visit(page, ts, float(d)) for (page, ts), d in zip(stamped, dwells))
    return Session(session_id=session_id, visits=visits)


def sessionize(entries: Iterable[RawLogEntry],
               timeout_seconds: float = config.DEFAULT_SESSION_TIMEOUT) -> SessionLog:
    """
    Split entries into sessions per client by inactivity timeout

    Consecutive requests of one client with a gap <= timeout share a session.
    Dwell of a visit is the gap to the next visit; the last visit gets the
    mean dwell of the others (0 for single-visit sessions).

    Args:
        entries: Raw entries in any order
        timeout_seconds: Maximum gap inside a session

    Returns:
        SessionLog with ids s1, s2, ... ordered by (start time, client)
    """
    by_client: Dict[str, List[Tuple[float, int, str]]] = defaultdict(list)
    for order, entry in enumerate(entries):
        by_client[entry.client_key].append((entry.timestamp, order, entry.page))

    runs = []
    for client, stream in by_client.items():
        stream.sort()
        current = [stream[0]]
        for item in stream[1:]:
            if item[0] - current[-1][0] > timeout_seconds:
                runs.append((current[0][0], client, current[0][1], current))
                current = []
            current.append(item)
        runs.append((current[0][0], client, current[0][1], current))

    runs.sort(key=lambda r: (r[0], r[1], r[2]))
    sessions = [
        _with_dwell(f"s{i}", [(page, ts) for ts, _, page in run])
        for i, (_, _, _, run) in enumerate(runs, start=1)
    ]
    logger.debug("Sessionized %d clients into %d sessions", len(by_client), len(sessions))
    return SessionLog.from_sessions(sessions)


def read_session_csv(path: str) -> SessionLog:
    """
    Read a session CSV with header ``session_id,page,timestamp,dwell_seconds``

    The dwell column is optional; if it is absent or blank for any visit of a
    session, dwell is recomputed for that whole session.

    Raises:
        LogParseError: On missing columns or unparseable values
    """
    with open(Path(path), "r", newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f, skipinitialspace=True)
        header = set(reader.fieldnames or [])
        missing = {"session_id", "page", "timestamp"} - header
        if missing:
            raise LogParseError(f"Session CSV missing columns: {', '.join(sorted(missing))}", 1)

        grouped: Dict[str, List[Tuple[float, int, str, Optional[float]]]] = {}
        for number, row in enumerate(reader, start=2):
            try:
                page = normalize_page(row["page"])
                timestamp = float(row["timestamp"])
                raw_dwell = (row.get("dwell_seconds") or "").strip()
                dwell = float(raw_dwell) if raw_dwell else None
            except (TypeError, ValueError) as e:
                raise LogParseError(f"Invalid session row: {e}", number)
            if timestamp < 0 or (dwell is not None and dwell < 0):
                raise LogParseError("Negative timestamp or dwell", number)
            grouped.setdefault(row["session_id"], []).append((timestamp, number, page, dwell))

    sessions = []
    for session_id, rows in grouped.items():
        rows.sort()
        if any(dwell is None for _, _, _, dwell in rows):
            sessions.append(_with_dwell(session_id, [(page, ts) for ts, _, page, _ in rows]))
        else:
            visits = tuple(Visit(page, ts, dwell) for ts, _, page, dwell in rows)
            sessions.append(Session(session_id=session_id, visits=visits))
    return SessionLog.from_sessions(sessions)


def read_sitemap(path: str) -> SiteMap:
    with open(Path(path), "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise LogParseError(f"SiteMap is not valid JSON: {e}")
    return SiteMap.from_dict(data)


def page_stats(log: SessionLog, site: SiteMap) -> Dict[str, PageStats]:
    """
    Aggregate dwell, visits and indegree per page

    Covers every page in the log and every SiteMap page. Pages without
    inbound links get indegree 1; pages unknown to the SiteMap get size 1.
    """
    dwell: Dict[str, float] = defaultdict(float)
    visits: Dict[str, int] = defaultdict(int)
    for session in log.sessions:
        for visit in session.visits:
            dwell[visit.page] += visit.dwell_seconds
            visits[visit.page] += 1

    indegree = site.indegree()
    return {
        page: PageStats(
            total_dwell_seconds=dwell.get(page, 0.0),
            visit_count=visits.get(page, 0),
            indegree=max(1, indegree.get(page, 0)),
            size_bytes=site.size_of(page),
        )
        for page in sorted(log.page_universe | site.pages)
    }


def read_usage_log(path: str,
                   timeout_seconds: float = config.DEFAULT_SESSION_TIMEOUT,
                   excluded_suffixes: Iterable[str] = config.DEFAULT_EXCLUDED_SUFFIXES,
                   user_agent_denylist: Iterable[str] = config.DEFAULT_USER_AGENT_DENYLIST,
                   ) -> Tuple[SessionLog, Dict[str, int]]:
    """
    Load a SessionLog from a session CSV (``.csv``) or a CLF access log

    Returns:
        Tuple of (log, counts of skipped lines and filtered entries)
    """
    if Path(path).suffix.lower() == ".csv":
        return read_session_csv(path), {"skipped_lines": 0, "filtered": 0}

    entries, skipped = read_clf_file(path)
    kept, dropped = filter_entries(entries, excluded_suffixes, user_agent_denylist)
    counts = {"skipped_lines": skipped, "filtered": sum(dropped.values())}
    return sessionize(kept, timeout_seconds), counts
