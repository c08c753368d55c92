"""Deterministic synthetic logs, sitemaps and corpora with known ground truth"""

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from .logparse import RawLogEntry, SessionLog, SiteMap, sessionize
from .validators import SynthSpecError

FILLER_TERMS = (
    "news", "update", "guide", "review", "notes", "archive", "contact", "about",
    "service", "details", "summary", "overview",
)
SESSION_SPACING = 100_000  # seconds between session starts, far above any timeout
EPOCH_START = 1_000_000_000


@dataclass(frozen=True)
class SynthSpec:
    page_count: int = 12
    session_count: int = 60
    cluster_blueprint: Tuple[Tuple[str, ...], ...] = ()
    rule_blueprint: Tuple[Tuple[Tuple[str, ...], str], ...] = ()
    text_blueprint: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    rng_seed: int = 0
    noise_rate: float = 0.0
    page_size: int = 1000
    filler_terms_per_page: int = 2

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        try:
            return cls(
                page_count=int(data.get("page_count", 12)),
                session_count=int(data.get("session_count", 60)),
                cluster_blueprint=tuple(tuple(g) for g in data.get("cluster_blueprint", [])),
                rule_blueprint=tuple((tuple(r["body"]), r["head"]) for r in data.get("rule_blueprint", [])),
                text_blueprint={p: tuple(t) for p, t in data.get("text_blueprint", {}).items()},
                rng_seed=int(data.get("rng_seed", 0)),
                noise_rate=float(data.get("noise_rate", 0.0)),
                page_size=int(data.get("page_size", 1000)),
                filler_terms_per_page=int(data.get("filler_terms_per_page", 2)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SynthSpecError(f"Invalid synth spec: {e}")

    def validate(self) -> None:
        """
        Raises:
            SynthSpecError: On an inconsistent blueprint
        """
        if self.page_count < 1 or self.session_count < 1:
            raise SynthSpecError("page_count and session_count must be positive")
        if not 0 <= self.noise_rate <= 1:
            raise SynthSpecError(f"noise_rate must be in [0, 1], got {self.noise_rate}")
        if self.page_size < 1:
            raise SynthSpecError("page_size must be positive")
        for body, head in self.rule_blueprint:
            if not body:
                raise SynthSpecError(f"Rule for {head!r} has an empty body")
            if head in body:
                raise SynthSpecError(f"Rule head {head!r} is inside its own body")
        seen = set()
        for group in self.cluster_blueprint:
            overlap = seen & set(group)
            if overlap:
                raise SynthSpecError(f"Pages in more than one cluster group: {sorted(overlap)}")
            seen |= set(group)


@dataclass
class SynthData:
    entries: List[RawLogEntry]
    log: SessionLog
    sitemap: SiteMap
    texts: Dict[str, str]
    ground_truth: dict


def _page_names(spec: SynthSpec) -> List[str]:
    named = {p for g in spec.cluster_blueprint for p in g}
    named |= {p for body, head in spec.rule_blueprint for p in (*body, head)}
    named |= set(spec.text_blueprint)
    # pad with generated names up to page_count
    generated = [f"/p{i:02d}" for i in range(max(0, spec.page_count - len(named)))]
    return sorted(named | set(generated))


def _session_pages(spec: SynthSpec, pages: List[str], index: int, rng: np.random.Generator) -> List[str]:
    groups = spec.cluster_blueprint or (tuple(pages),)
    visit = list(groups[index % len(groups)])

    if spec.noise_rate > 0:
        visit = [p for p in visit if rng.random() >= spec.noise_rate]
        if rng.random() < spec.noise_rate:
            extra = pages[int(rng.integers(len(pages)))]
            if extra not in visit:
                visit.append(extra)

    for body, head in spec.rule_blueprint:
        if set(body) <= set(visit) and head not in visit:
            visit.append(head)

    if not visit:
        visit = [groups[index % len(groups)][0]]
    return visit


def _sitemap(spec: SynthSpec, pages: List[str]) -> SiteMap:
    links: Dict[str, set] = {p: set() for p in pages}
    for group in spec.cluster_blueprint:
        members = list(group)
        for i, page in enumerate(members):
            target = members[(i + 1) % len(members)]
            if target != page:
                links[page].add(target)
    for body, head in spec.rule_blueprint:
        for page in body:
            links[page].add(head)
    return SiteMap(
        pages=frozenset(pages),
        size_bytes={p: spec.page_size for p in pages},
        outlinks={p: frozenset(t) for p, t in links.items()},
    )


def _texts(spec: SynthSpec, pages: List[str], rng: np.random.Generator) -> Dict[str, str]:
    texts = {}
    for page in pages:
        picks = rng.choice(len(FILLER_TERMS), size=min(spec.filler_terms_per_page, len(FILLER_TERMS)),
                           replace=False)
        words = list(spec.text_blueprint.get(page, ())) + [FILLER_TERMS[int(i)] for i in sorted(picks)]
        texts[page] = " ".join(words)
    return texts


def generate(spec: SynthSpec) -> SynthData:
    """
    Generate sessions realizing the blueprints

    Session i visits cluster group i mod (number of groups) in blueprint
    order; with noise each page is dropped, and one random page inserted,
    with probability noise_rate. Every rule whose body is present gets its
    head appended. Each session comes from its own client, far apart in time.

    Raises:
        SynthSpecError: On an inconsistent blueprint
    """
    spec.validate()
    rng = np.random.default_rng(spec.rng_seed)
    pages = _page_names(spec)

    entries = []
    for index in range(spec.session_count):
        client = f"10.{index // 65536 % 256}.{index // 256 % 256}.{index % 256}|synth"
        timestamp = EPOCH_START + index * SESSION_SPACING
        for page in _session_pages(spec, pages, index, rng):
            entries.append(RawLogEntry(client_key=client, page=page, timestamp=float(timestamp),
                                       bytes=spec.page_size, status=200, user_agent="synth"))
            timestamp += int(rng.integers(30, 91))

    sitemap = _sitemap(spec, pages)
    texts = _texts(spec, pages, rng)
    ground_truth = {
        "rng_seed": spec.rng_seed,
        "noise_rate": spec.noise_rate,
        "pages": pages,
        "clusters": [sorted(g) for g in spec.cluster_blueprint],
        "rules": [{"body": sorted(body), "head": head} for body, head in spec.rule_blueprint],
        "relevance": {p: sorted(t) for p, t in sorted(spec.text_blueprint.items())},
    }
    return SynthData(entries=entries, log=sessionize(entries), sitemap=sitemap,
                     texts=texts, ground_truth=ground_truth)


def format_clf(entry: RawLogEntry) -> str:
    """Render an entry as a Combined Log Format line"""
    host, _, agent = entry.client_key.partition("|")
    moment = datetime.fromtimestamp(entry.timestamp, tz=timezone.utc).strftime("%d/%b/%Y:%H:%M:%S %z")
    size = "-" if entry.bytes is None else str(entry.bytes)
    status = "-" if entry.status is None else str(entry.status)
    return f'{host} - - [{moment}] "GET {entry.page} HTTP/1.1" {status} {size} "-" "{agent}"'


def write_synth(data: SynthData, out_dir: str) -> Dict[str, Path]:
    """Write access.log, sitemap.json, docs.json and ground_truth.json"""
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    paths = {
        "log": target / "access.log",
        "sitemap": target / "sitemap.json",
        "docs": target / "docs.json",
        "ground_truth": target / "ground_truth.json",
    }
    with open(paths["log"], "w", encoding="utf-8") as f:
        for entry in data.entries:
            f.write(format_clf(entry) + "\n")
    with open(paths["sitemap"], "w", encoding="utf-8") as f:
        json.dump(data.sitemap.to_dict(), f, indent=2, sort_keys=True)
    with open(paths["docs"], "w", encoding="utf-8") as f:
        json.dump(dict(sorted(data.texts.items())), f, indent=2)
    with open(paths["ground_truth"], "w", encoding="utf-8") as f:
        json.dump(data.ground_truth, f, indent=2, sort_keys=True)
    return paths


def read_synth_spec(path: str) -> SynthSpec:
    with open(Path(path), "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise SynthSpecError(f"Synth spec is not valid JSON: {e}")
    return SynthSpec.from_dict(data)
