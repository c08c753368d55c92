"""Usage-pattern clustering of pages (average-linkage agglomerative, cosine)"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform

from . import config
from .logparse import SessionLog
from .pageweight import PageWeightTable
from .validators import ConfigValidator, ModelFormatError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PageUsageVector:
    page: str
    occurrence: Dict[str, float] = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return not self.occurrence


@dataclass(frozen=True)
class Clustering:
    clusters: Tuple[Tuple[str, ...], ...]
    assignment: Dict[str, int]

    @classmethod
    def from_clusters(cls, clusters) -> "Clustering":
        """Canonical form: pages sorted inside clusters, clusters sorted by first page"""
        ordered = sorted(tuple(sorted(c)) for c in clusters if c)
        assignment = {}
        for index, members in enumerate(ordered):
            for page in members:
                if page in assignment:
                    raise ValueError(f"Page {page!r} appears in more than one cluster")
                assignment[page] = index
        return cls(clusters=tuple(ordered), assignment=assignment)

    def members_of(self, page: str) -> FrozenSet[str]:
        """Pages sharing a cluster with page (itself included); unknown pages are singletons"""
        index = self.assignment.get(page)
        if index is None:
            return frozenset({page})
        return frozenset(self.clusters[index])

    def __len__(self) -> int:
        return len(self.clusters)

    def to_list(self) -> List[List[str]]:
        return [list(c) for c in self.clusters]

    @classmethod
    def from_list(cls, data) -> "Clustering":
        try:
            return cls.from_clusters(data)
        except (TypeError, ValueError) as e:
            raise ModelFormatError(f"Invalid clustering: {e}")


def build_usage_vectors(log: SessionLog, weights: PageWeightTable) -> List[PageUsageVector]:
    """
    One sparse session-occurrence vector per page

    The page universe is the log's pages plus every page of the weight table,
    so never-visited pages get empty vectors. Entries carry the page weight,
    or 1.0 for a visited page whose weight is 0.
    """
    occurrence: Dict[str, Dict[str, float]] = {p: {} for p in log.page_universe | set(weights.pages)}
    for session in log.sessions:
        for page in session.pages:
            value = weights.get(page)
            occurrence[page][session.session_id] = value if value > 0 else 1.0
    return [PageUsageVector(page=p, occurrence=occurrence[p]) for p in sorted(occurrence)]


def cosine_similarity(a: PageUsageVector, b: PageUsageVector) -> float:
    """Cosine over the shared session dimensions; 0 if either vector is empty"""
    if a.is_empty or b.is_empty:
        return 0.0
    dot = sum(value * b.occurrence[key] for key, value in a.occurrence.items() if key in b.occurrence)
    norm_a = math.sqrt(sum(v * v for v in a.occurrence.values()))
    norm_b = math.sqrt(sum(v * v for v in b.occurrence.values()))
    return min(1.0, dot / (norm_a * norm_b))


def similarity_matrix(vectors: List[PageUsageVector]) -> np.ndarray:
    """Dense pairwise cosine matrix for non-empty vectors"""
    sessions = sorted({key for v in vectors for key in v.occurrence})
    column = {key: j for j, key in enumerate(sessions)}
    matrix = np.zeros((len(vectors), len(sessions)))
    for i, vector in enumerate(vectors):
        for key, value in vector.occurrence.items():
            matrix[i, column[key]] = value
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    unit = matrix / np.where(norms > 0, norms, 1.0)
    return np.clip(unit @ unit.T, 0.0, 1.0)


def agglomerative_cluster(vectors: List[PageUsageVector],
                          threshold: float = config.DEFAULT_CLUSTER_THRESHOLD) -> Clustering:
    """
    Average-linkage agglomerative clustering

    Merges clusters while their average cosine similarity reaches the
    threshold. Pages are clustered in sorted order, so the result does not
    depend on the order of vectors. Pages with empty vectors stay singletons.

    Args:
        vectors: Usage vectors, in any order
        threshold: Minimum average similarity for a merge, in [0, 1]

    Returns:
        Clustering partitioning every page of vectors
    """
    ConfigValidator.validate_fraction("cluster_threshold", threshold, allow_zero=True)

    ordered = sorted(vectors, key=lambda v: v.page)
    active = [v for v in ordered if not v.is_empty]
    singletons = [(v.page,) for v in ordered if v.is_empty]

    if len(active) < 2:
        return Clustering.from_clusters([(v.page,) for v in active] + singletons)

    distance = 1.0 - similarity_matrix(active)
    np.fill_diagonal(distance, 0.0)
    tree = linkage(squareform(distance, checks=False), method="average")
    labels = fcluster(tree, t=1.0 - threshold + config.SIMILARITY_EPSILON, criterion="distance")

    groups: Dict[int, List[str]] = {}
    for vector, label in zip(active, labels):
        groups.setdefault(int(label), []).append(vector.page)

    logger.info("Clustered %d pages into %d usage clusters", len(ordered), len(groups) + len(singletons))
    return Clustering.from_clusters(list(groups.values()) + singletons)
