"""Precision/coverage evaluation over held-out sessions"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import config
from .logparse import SessionLog
from .recommender import MODE_HYBRID, recommend_pages

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalCase:
    observed_prefix: Tuple[str, ...]
    holdout: FrozenSet[str]

    def __post_init__(self):
        if not self.observed_prefix or not self.holdout:
            raise ValueError("Evaluation case needs a non-empty prefix and holdout")
        if set(self.observed_prefix) & self.holdout:
            raise ValueError("Prefix and holdout must be disjoint")


@dataclass(frozen=True)
class EvalRow:
    n: int
    precision_pct: float
    coverage_pct: float
    valid_cases: int
    excluded_cases: int


@dataclass
class EvalReport:
    rows: List[EvalRow]
    details: List[dict] = field(default_factory=list)
    mode: str = MODE_HYBRID

    def row_for(self, n: int) -> Optional[EvalRow]:
        return next((row for row in self.rows if row.n == n), None)


def precision(recommended: Iterable[str], relevant: Iterable[str]) -> Optional[float]:
    """|relevant & recommended| / |recommended|; None when nothing was recommended"""
    recommended = set(recommended)
    if not recommended:
        return None
    return len(recommended & set(relevant)) / len(recommended)


def coverage(recommended: Iterable[str], relevant: Iterable[str]) -> Optional[float]:
    """|relevant & recommended| / |relevant|; None when nothing is relevant"""
    relevant = set(relevant)
    if not relevant:
        return None
    return len(relevant & set(recommended)) / len(relevant)


def make_cases(log: SessionLog,
               prefix_fraction: float = config.DEFAULT_PREFIX_FRACTION) -> Tuple[List[EvalCase], int]:
    """
    Split each session into an observed prefix and a holdout remainder

    The prefix is the first floor(len * fraction) visits (at least one);
    the holdout is the distinct later pages not seen in the prefix.

    Returns:
        Tuple of (cases, sessions skipped because nothing was left to hold out)
    """
    cases = []
    skipped = 0
    for session in log.sessions:
        sequence = session.page_sequence
        cut = max(1, int(len(sequence) * prefix_fraction))
        prefix = tuple(dict.fromkeys(sequence[:cut]))
        holdout = frozenset(sequence[cut:]) - set(prefix)
        if not holdout:
            skipped += 1
            continue
        cases.append(EvalCase(observed_prefix=prefix, holdout=holdout))
    return cases, skipped


def evaluate(model, cases: Sequence[EvalCase], n_values: Sequence[int],
             mode: str = MODE_HYBRID) -> EvalReport:
    """
    Mean precision and coverage per n over all cases

    One recommendation run per case at the largest n; every smaller n reads a
    prefix of that ranking. Cases with an empty recommendation list are
    excluded from the precision mean and counted.

    Args:
        model: Trained ModelBundle
        cases: Evaluation cases
        n_values: List sizes to report
        mode: "hybrid" or "rules"
    """
    if not cases:
        raise ValueError("At least one evaluation case is required")
    if not n_values or any(n < 1 for n in n_values):
        raise ValueError("n_values must be a non-empty list of positive integers")

    largest = max(n_values)
    rankings = [recommend_pages(case.observed_prefix, model, largest, mode).pages for case in cases]

    rows = []
    details = []
    for n in sorted(set(n_values)):
        precisions, coverages = [], []
        excluded = 0
        for index, (case, ranking) in enumerate(zip(cases, rankings)):
            shown = ranking[:n]
            p = precision(shown, case.holdout)
            c = coverage(shown, case.holdout)
            if p is None or c is None:
                excluded += 1
            else:
                precisions.append(p)
                coverages.append(c)
            details.append({
                "case": index,
                "n": n,
                "prefix": list(case.observed_prefix),
                "holdout": sorted(case.holdout),
                "recommended": shown,
                "hits": sorted(set(shown) & case.holdout),
                "precision": p,
                "coverage": c,
            })

        valid = len(precisions)
        rows.append(EvalRow(
            n=n,
            precision_pct=100.0 * sum(precisions) / valid if valid else 0.0,
            coverage_pct=100.0 * sum(coverages) / valid if valid else 0.0,
            valid_cases=valid,
            excluded_cases=excluded,
        ))
        logger.debug("n=%d: %d valid cases, %d excluded", n, valid, excluded)

    return EvalReport(rows=rows, details=details, mode=mode)
