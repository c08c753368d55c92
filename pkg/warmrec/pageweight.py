"""Quantitative page weights from dwell time and visit frequency"""

from dataclasses import dataclass
from typing import Dict, Mapping

from .logparse import PageStats
from .validators import EmptyUsageError, ModelFormatError


@dataclass(frozen=True)
class PageWeightTable:
    duration_score: Dict[str, float]
    frequency_score: Dict[str, float]
    weight: Dict[str, float]

    def __contains__(self, page: str) -> bool:
        return page in self.weight

    def __len__(self) -> int:
        return len(self.weight)

    def get(self, page: str) -> float:
        """Combined weight of a page, 0 for unknown pages"""
        return self.weight.get(page, 0.0)

    @property
    def pages(self):
        return sorted(self.weight)

    @property
    def max_weight(self) -> float:
        return max(self.weight.values(), default=0.0)

    @classmethod
    def uniform(cls, pages, value: float = 1.0) -> "PageWeightTable":
        """Table giving every page the same scores; handy for classic-support runs"""
        scores = {p: value for p in pages}
        return cls(dict(scores), dict(scores), dict(scores))

    def to_dict(self) -> dict:
        return {
            page: {
                "duration": self.duration_score[page],
                "frequency": self.frequency_score[page],
                "weight": self.weight[page],
            }
            for page in self.pages
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PageWeightTable":
        try:
            return cls(
                duration_score={p: float(v["duration"]) for p, v in data.items()},
                frequency_score={p: float(v["frequency"]) for p, v in data.items()},
                weight={p: float(v["weight"]) for p, v in data.items()},
            )
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise ModelFormatError(f"Invalid page weight table: {e}")


def duration_score(stats: Mapping[str, PageStats]) -> Dict[str, float]:
    """
    Dwell time per byte, normalized by the largest ratio over all pages

    Returns all zeros when no page has any dwell.
    """
    ratios = {p: s.total_dwell_seconds / max(1, s.size_bytes) for p, s in stats.items()}
    top = max(ratios.values(), default=0.0)
    if top <= 0:
        return {p: 0.0 for p in ratios}
    return {p: r / top for p, r in ratios.items()}


def frequency_score(stats: Mapping[str, PageStats]) -> Dict[str, float]:
    """
    Share of all visits, divided by the page's indegree

    Raises:
        EmptyUsageError: If there are no visits at all
    """
    total = sum(s.visit_count for s in stats.values())
    if total <= 0:
        raise EmptyUsageError()
    return {p: (s.visit_count / total) * (1.0 / max(1, s.indegree)) for p, s in stats.items()}


def page_weight(duration: float, frequency: float) -> float:
    """Harmonic mean of duration and frequency scores; 0 when both are 0"""
    denominator = frequency + duration
    if denominator <= 0:
        return 0.0
    return 2.0 * frequency * duration / denominator


def build_weight_table(stats: Mapping[str, PageStats]) -> PageWeightTable:
    """
    Compute the full weight table from raw page statistics

    Raises:
        EmptyUsageError: If there are no visits at all
    """
    durations = duration_score(stats)
    frequencies = frequency_score(stats)
    weights = {p: page_weight(durations[p], frequencies[p]) for p in stats}
    return PageWeightTable(durations, frequencies, weights)
