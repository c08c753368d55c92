"""HITS hub/authority scoring over a candidate page graph"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from . import config
from .logparse import SiteMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateGraph:
    nodes: Tuple[str, ...]
    adjacency: np.ndarray

    def __post_init__(self):
        n = len(self.nodes)
        if len(set(self.nodes)) != n:
            raise ValueError("Candidate graph nodes must be unique")
        if self.adjacency.shape != (n, n):
            raise ValueError(f"Adjacency shape {self.adjacency.shape} does not match {n} nodes")
        if n and np.any(np.diag(self.adjacency)):
            raise ValueError("Candidate graph must not contain self-loops")

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum())

    def edges(self):
        return [(self.nodes[i], self.nodes[j]) for i, j in np.argwhere(self.adjacency)]


@dataclass(frozen=True)
class HitsScores:
    hub: Dict[str, float]
    authority: Dict[str, float]
    iterations_used: int
    dominant_eigenvalue_estimate: float
    converged: bool = True
    primitive: Optional[bool] = None

    def trace(self) -> dict:
        return {
            "iterations": self.iterations_used,
            "eigenvalue": self.dominant_eigenvalue_estimate,
            "converged": self.converged,
            "primitive": self.primitive,
            "authority": {p: self.authority[p] for p in sorted(self.authority)},
        }


def build_candidate_graph(candidate_pages: Iterable[str], site: SiteMap) -> CandidateGraph:
    """
    Induced link subgraph of the SiteMap over the candidate pages

    Nodes are sorted; A[i][j] = 1 iff node i links to node j.
    """
    nodes = tuple(sorted(set(candidate_pages)))
    if not nodes:
        raise ValueError("Candidate set must not be empty")
    index = {page: i for i, page in enumerate(nodes)}
    adjacency = np.zeros((len(nodes), len(nodes)), dtype=np.int8)
    for page in nodes:
        for target in site.links_of(page):
            j = index.get(target)
            if j is not None and target != page:
                adjacency[index[page], j] = 1
    return CandidateGraph(nodes=nodes, adjacency=adjacency)


def _l1_normalize(vector: np.ndarray) -> np.ndarray:
    total = vector.sum()
    if total <= 0:
        return np.full_like(vector, 1.0 / len(vector))
    return vector / total


def is_primitive_product(graph: CandidateGraph,
                         max_nodes: int = config.PRIMITIVITY_CHECK_MAX_NODES) -> Optional[bool]:
    """
    Whether both A^tA and AA^t are primitive

    Checks that some power k <= n of each product is entrywise positive.

    Returns:
        True/False, or None (unchecked) when the graph exceeds max_nodes
    """
    n = len(graph.nodes)
    if n > max_nodes:
        return None
    a = graph.adjacency.astype(np.int64)
    for product in (a.T @ a, a @ a.T):
        pattern = (product > 0).astype(np.int64)
        power = pattern.copy()
        for _ in range(1, n):
            if power.all():
                break
            power = ((power @ pattern) > 0).astype(np.int64)
        if not power.all():
            return False
    return True


def hits_iterate(graph: CandidateGraph,
                 tolerance: float = config.DEFAULT_HITS_TOLERANCE,
                 max_iterations: int = config.DEFAULT_HITS_MAX_ITERATIONS,
                 initial_hub: Optional[np.ndarray] = None) -> HitsScores:
    """
    Alternate v = A^t u, u = A v with L1 normalization until both settle

    Args:
        graph: Candidate graph
        tolerance: Stop when the L1 change of both vectors is below this
        max_iterations: Hard cap on full update steps
        initial_hub: Strictly positive starting hub vector (default all ones)

    Returns:
        HitsScores with sum-1 hub and authority vectors and the Rayleigh
        quotient of A^tA at the final authority vector
    """
    n = len(graph.nodes)
    if n == 0:
        raise ValueError("Candidate graph must have at least one node")

    primitive = is_primitive_product(graph)
    if graph.edge_count == 0:
        uniform = {page: 1.0 / n for page in graph.nodes}
        return HitsScores(hub=dict(uniform), authority=dict(uniform), iterations_used=0,
                          dominant_eigenvalue_estimate=0.0, converged=True, primitive=primitive)

    a = graph.adjacency.astype(float)
    hub = _l1_normalize(np.ones(n) if initial_hub is None else np.asarray(initial_hub, dtype=float))
    authority = np.full(n, 1.0 / n)
    converged = False
    iterations = 0

    while iterations < max_iterations:
        iterations += 1
        new_authority = _l1_normalize(a.T @ hub)
        new_hub = _l1_normalize(a @ new_authority)
        change = max(np.abs(new_authority - authority).sum(), np.abs(new_hub - hub).sum())
        authority, hub = new_authority, new_hub
        if change < tolerance:
            converged = True
            break

    if not converged:
        logger.warning("HITS did not converge within %d iterations", max_iterations)

    projected = a @ authority
    eigenvalue = float(projected @ projected / (authority @ authority))
    logger.debug("HITS finished after %d iterations (eigenvalue %.6g)", iterations, eigenvalue)

    return HitsScores(
        hub={page: float(value) for page, value in zip(graph.nodes, hub)},
        authority={page: float(value) for page, value in zip(graph.nodes, authority)},
        iterations_used=iterations,
        dominant_eigenvalue_estimate=eigenvalue,
        converged=converged,
        primitive=primitive,
    )
