"""Online recommendation pipeline: rule seeds, cluster extension, HITS, TF-IDF fusion"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

from . import config
from .cluster import Clustering
from .hits import build_candidate_graph, hits_iterate
from .pageweight import PageWeightTable
from .textmine import session_query, tfidf_scores
from .warm import RuleBase, WeightedRule

if TYPE_CHECKING:
    from .model import ModelBundle

logger = logging.getLogger(__name__)

PROVENANCE_SEED = "seed"
PROVENANCE_CLUSTER = "cluster-extension"
MODE_HYBRID = "hybrid"
MODE_RULES = "rules"
MODES = (MODE_HYBRID, MODE_RULES)


@dataclass(frozen=True)
class ActiveSession:
    """Session vector S: page -> weight for accessed pages with positive weight"""

    weights: Dict[str, float]
    pages: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if any(w <= 0 for w in self.weights.values()):
            raise ValueError("Active session weights must be positive; omit zero-weight pages")
        # every weighted page counts as visited
        object.__setattr__(self, "pages", frozenset(self.pages) | frozenset(self.weights))

    def weight(self, page: str) -> float:
        return self.weights.get(page, 0.0)

    @classmethod
    def from_pages(cls, pages: Iterable[str], weights: PageWeightTable) -> "ActiveSession":
        """
        Session vector from visited pages and global page weights

        Pages unknown to the weight table are logged and kept only as visited.
        """
        visited = frozenset(pages)
        unknown = sorted(p for p in visited if p not in weights)
        if unknown:
            logger.warning("Ignoring pages unknown to the model: %s", ", ".join(unknown))
        vector = {p: weights.get(p) for p in visited if weights.get(p) > 0}
        return cls(weights=vector, pages=visited)


@dataclass(frozen=True)
class ScoredRule:
    rule: WeightedRule
    match_score: float
    rec_score: float

    def to_dict(self) -> dict:
        return {"body": list(self.rule.body), "head": self.rule.head, "wconf": self.rule.wconf,
                "match_score": self.match_score, "rec_score": self.rec_score}


@dataclass(frozen=True)
class Recommendation:
    page: str
    rec_score: float
    hub_score: float
    text_score: float
    final_score: float
    provenance: str
    has_text: bool = True

    def to_dict(self) -> dict:
        return {
            "page": self.page,
            "final_score": self.final_score,
            "rec_score": self.rec_score,
            "hub_score": self.hub_score,
            "text_score": self.text_score,
            "provenance": self.provenance,
            "has_text": self.has_text,
        }


@dataclass(frozen=True)
class RecommendationSet:
    items: Tuple[Recommendation, ...]
    trace: Dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def pages(self) -> List[str]:
        return [item.page for item in self.items]

    def top(self, n: int) -> "RecommendationSet":
        return RecommendationSet(items=self.items[:n], trace=self.trace)

    def to_dict(self) -> dict:
        return {"items": [item.to_dict() for item in self.items], "trace": self.trace}

    def to_json(self) -> str:
        """Canonical serialization shared by the CLI and the HTTP service"""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def dissimilarity(session: ActiveSession, rule: WeightedRule, weights: PageWeightTable,
                  form: str = config.DEFAULT_DISSIMILARITY_FORM) -> float:
    """
    Sum over rule body pages of (2 * (w_s - w_r))^2 / (w_s + w_r)

    w_s is the session weight (0 when absent), w_r the global page weight.
    With form "plain" the numerator is 2 * (w_s - w_r)^2. Terms with a zero
    denominator are skipped.
    """
    total = 0.0
    for page in rule.body:
        w_s = session.weight(page)
        w_r = weights.get(page)
        denominator = w_s + w_r
        if denominator <= 0:
            continue
        delta = w_s - w_r
        numerator = (2.0 * delta) ** 2 if form == "scaled" else 2.0 * delta ** 2
        total += numerator / denominator
    return total


def match_score(session: ActiveSession, rule: WeightedRule, weights: PageWeightTable,
                form: str = config.DEFAULT_DISSIMILARITY_FORM) -> float:
    """1 - sqrt(dissimilarity / |body|) / 4, clamped to [0, 1]"""
    m = len(rule.body)
    score = 1.0 - math.sqrt(dissimilarity(session, rule, weights, form) / m) / 4.0
    return min(1.0, max(0.0, score))


def seed_recommendations(session: ActiveSession, rules: RuleBase, weights: PageWeightTable,
                         n: int, form: str = config.DEFAULT_DISSIMILARITY_FORM) -> List[ScoredRule]:
    """
    Top-n rule heads by rec_score = match_score * wconf

    Rules whose head is already in the session are skipped; each head keeps
    its best-scoring rule. Ties go to the lexicographically smaller head.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    best: Dict[str, ScoredRule] = {}
    for rule in rules:
        if rule.head in session.pages:
            continue
        match = match_score(session, rule, weights, form)
        scored = ScoredRule(rule=rule, match_score=match, rec_score=match * rule.wconf)
        current = best.get(rule.head)
        if current is None or scored.rec_score > current.rec_score:
            best[rule.head] = scored

    ranked = sorted(best.values(), key=lambda s: (-s.rec_score, s.rule.head, s.rule.body))
    return ranked[:n]


def extend_with_clusters(seed: Sequence[ScoredRule], clustering: Clustering,
                         exclude: Iterable[str] = ()) -> Set[str]:
    """Seed heads plus every page sharing a cluster with one, minus excluded pages"""
    candidates: Set[str] = set()
    for scored in seed:
        candidates |= clustering.members_of(scored.rule.head)
    return candidates - set(exclude)


def _fuse(hub: float, text: float, rec: float, fusion_weights: Sequence[float]) -> float:
    w_hub, w_text, w_rec = fusion_weights
    return w_hub * hub + w_text * text + w_rec * rec


def recommend(session: ActiveSession, model: "ModelBundle", n: int,
              mode: str = MODE_HYBRID) -> RecommendationSet:
    """
    Run the online pipeline for one active session

    hybrid: seed rules -> cluster extension -> HITS hub ranking -> TF-IDF
    against the session's own page text -> fused score. rules: seed heads
    ranked by rec_score alone.

    Args:
        session: Active session vector
        model: Trained model bundle
        n: Number of recommendations to return
        mode: "hybrid" or "rules"

    Returns:
        RecommendationSet sorted by final score, then page
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")

    params = model.config
    form = params.dissimilarity_form
    seed = seed_recommendations(session, model.rules, model.page_weights, params.seed_size, form)
    trace: Dict = {
        "mode": mode,
        "session": sorted(session.pages),
        "seed": [s.to_dict() for s in seed],
        "diagnostics": [],
    }
    if not model.rules.rules:
        trace["diagnostics"].append("empty rule base")

    rec_by_page = {s.rule.head: s.rec_score for s in seed}

    if mode == MODE_RULES:
        items = [
            Recommendation(page=page, rec_score=rec, hub_score=0.0, text_score=0.0,
                           final_score=rec, provenance=PROVENANCE_SEED,
                           has_text=page in model.tfidf)
            for page, rec in rec_by_page.items()
        ]
        return _ranked(items, n, trace)

    candidates = extend_with_clusters(seed, model.clustering, exclude=session.pages)
    trace["candidates"] = sorted(candidates)
    if not candidates:
        trace["diagnostics"].append("empty candidate set")
        return RecommendationSet(items=(), trace=trace)

    graph = build_candidate_graph(candidates, model.sitemap)
    scores = hits_iterate(graph, params.hits_tolerance, params.hits_max_iterations)
    trace["hits"] = scores.trace()
    trace["hits"]["edges"] = graph.edge_count

    if graph.edge_count == 0:
        hub = {page: 0.0 for page in graph.nodes}
    else:
        top_hub = max(scores.hub.values())
        hub = {page: (value / top_hub if top_hub > 0 else 0.0) for page, value in scores.hub.items()}

    query = session_query(model.tfidf, session.pages)
    text = tfidf_scores(model.tfidf, candidates, query)
    missing_text = sorted(p for p in candidates if p not in model.tfidf)
    if missing_text:
        trace["diagnostics"].append(f"no text for {len(missing_text)} candidate pages")

    items = [
        Recommendation(
            page=page,
            rec_score=rec_by_page.get(page, 0.0),
            hub_score=hub[page],
            text_score=text[page],
            final_score=_fuse(hub[page], text[page], rec_by_page.get(page, 0.0), params.fusion_weights),
            provenance=PROVENANCE_SEED if page in rec_by_page else PROVENANCE_CLUSTER,
            has_text=page in model.tfidf,
        )
        for page in sorted(candidates)
    ]
    return _ranked(items, n, trace)


def _ranked(items: List[Recommendation], n: int, trace: Dict) -> RecommendationSet:
    ordered = sorted(items, key=lambda r: (-r.final_score, r.page))
    return RecommendationSet(items=tuple(ordered[:n]), trace=trace)


def recommend_pages(pages: Iterable[str], model: "ModelBundle", n: int,
                    mode: str = MODE_HYBRID) -> RecommendationSet:
    """Convenience wrapper building the ActiveSession from visited pages"""
    session = ActiveSession.from_pages(pages, model.page_weights)
    return recommend(session, model, n, mode)
