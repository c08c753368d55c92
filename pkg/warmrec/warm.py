"""Weighted Apriori: frequent itemsets and single-head association rules"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from . import config
from .logparse import SessionLog
from .pageweight import PageWeightTable
from .validators import ConfigValidator, ModelFormatError

logger = logging.getLogger(__name__)

Itemset = Tuple[str, ...]


@dataclass(frozen=True)
class MiningParams:
    min_wsupport: float = config.DEFAULT_MIN_WSUPPORT
    min_wconf: float = config.DEFAULT_MIN_WCONF
    max_itemset_size: int = config.DEFAULT_MAX_ITEMSET_SIZE

    def __post_init__(self):
        # min_wsupport 0 switches the support threshold off
        ConfigValidator.validate_fraction("min_wsupport", self.min_wsupport, allow_zero=True)
        ConfigValidator.validate_fraction("min_wconf", self.min_wconf, allow_zero=True)
        ConfigValidator.validate_positive("max_itemset_size", self.max_itemset_size, integer=True)


@dataclass(frozen=True)
class WeightedRule:
    body: Itemset
    head: str
    wsupport: float
    wconf: float

    def __post_init__(self):
        if not self.body:
            raise ValueError("Rule body must not be empty")
        if self.head in self.body:
            raise ValueError(f"Rule head {self.head!r} is inside its own body")

    def to_dict(self) -> dict:
        return {"body": list(self.body), "head": self.head,
                "wsupport": self.wsupport, "wconf": self.wconf}

    @classmethod
    def from_dict(cls, data: dict) -> "WeightedRule":
        return cls(body=tuple(data["body"]), head=data["head"],
                   wsupport=float(data["wsupport"]), wconf=float(data["wconf"]))


def rule_sort_key(rule: WeightedRule):
    return (-rule.wconf, -rule.wsupport, rule.body, rule.head)


@dataclass(frozen=True)
class RuleBase:
    rules: Tuple[WeightedRule, ...]
    page_weights: Optional[PageWeightTable] = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[WeightedRule]:
        return iter(self.rules)

    def to_list(self) -> List[dict]:
        return [r.to_dict() for r in self.rules]

    @classmethod
    def from_list(cls, data: list, page_weights: Optional[PageWeightTable] = None) -> "RuleBase":
        try:
            rules = tuple(WeightedRule.from_dict(r) for r in data)
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"Invalid rule: {e}")
        return cls(rules=tuple(sorted(rules, key=rule_sort_key)), page_weights=page_weights)


@dataclass
class FrequentItemsets:
    """Mining result: frequent itemsets plus the support of every counted candidate"""

    itemsets: List[Tuple[Itemset, float]]
    counted: Dict[Itemset, float]
    params: MiningParams

    def __iter__(self):
        return iter(self.itemsets)

    def __len__(self) -> int:
        return len(self.itemsets)

    def wsupport_of(self, itemset: Iterable[str]) -> Optional[float]:
        return self.counted.get(tuple(sorted(itemset)))


def _tidsets(log: SessionLog) -> Dict[str, FrozenSet[int]]:
    """Map each page to the indexes of the sessions containing it"""
    tids: Dict[str, set] = {}
    for index, session in enumerate(log.sessions):
        for page in session.pages:
            tids.setdefault(page, set()).add(index)
    return {p: frozenset(t) for p, t in tids.items()}


def _weighted_support(count: int, itemset: Itemset, weights: PageWeightTable, n_sessions: int) -> float:
    if count == 0 or n_sessions == 0:
        return 0.0
    mean_weight = sum(weights.get(p) for p in itemset) / len(itemset)
    return count * mean_weight / n_sessions


def wsupport(itemset: Iterable[str], log: SessionLog, weights: PageWeightTable) -> float:
    """
    Weighted support of an itemset

    Fraction of sessions containing every page of the itemset, scaled by the
    mean weight of the itemset's pages.
    """
    items = tuple(sorted(set(itemset)))
    if not items:
        raise ValueError("Itemset must not be empty")
    count = sum(1 for s in log.sessions if s.pages.issuperset(items))
    return _weighted_support(count, items, weights, len(log.sessions))


def _candidates(previous: List[Itemset], k: int) -> List[Itemset]:
    """Join (k-1)-itemsets sharing a prefix, keep those whose subsets all survived"""
    survivors = set(previous)
    joined = []
    for i in range(len(previous)):
        for j in range(i + 1, len(previous)):
            a, b = previous[i], previous[j]
            if a[:k - 2] != b[:k - 2]:
                continue
            candidate = tuple(sorted(set(a) | set(b)))
            if len(candidate) != k:
                continue
            if all(sub in survivors for sub in combinations(candidate, k - 1)):
                joined.append(candidate)
    return sorted(set(joined))


def mine_weighted_itemsets(log: SessionLog, weights: PageWeightTable,
                           params: MiningParams = MiningParams()) -> FrequentItemsets:
    """
    Level-wise weighted Apriori

    Mean-weight scaling is not anti-monotone, so levels are pruned on the
    bound containment-fraction x largest page weight, then every surviving
    candidate is filtered exactly against min_wsupport.

    Args:
        log: Transaction database
        weights: Page weights
        params: Thresholds and size limit

    Returns:
        FrequentItemsets with itemsets sorted by (size, pages)
    """
    n_sessions = len(log.sessions)
    if n_sessions == 0:
        return FrequentItemsets([], {}, params)

    tids = _tidsets(log)
    max_weight = weights.max_weight

    def bound_ok(count: int) -> bool:
        return count > 0 and count / n_sessions * max_weight >= params.min_wsupport

    counted: Dict[Itemset, float] = {}
    frequent: List[Tuple[Itemset, float]] = []
    level: Dict[Itemset, FrozenSet[int]] = {}

    for page in sorted(tids):
        if bound_ok(len(tids[page])):
            level[(page,)] = tids[page]

    k = 1
    while level:
        for itemset in sorted(level):
            support = _weighted_support(len(level[itemset]), itemset, weights, n_sessions)
            counted[itemset] = support
            if support >= params.min_wsupport:
                frequent.append((itemset, support))

        logger.debug("Level %d: %d candidates kept by the bound", k, len(level))
        if k >= params.max_itemset_size:
            break

        k += 1
        next_level = {}
        for candidate in _candidates(sorted(level), k):
            covering = level[candidate[:-1]] & tids[candidate[-1]]
            if bound_ok(len(covering)):
                next_level[candidate] = covering
        level = next_level

    logger.info("Mined %d weighted itemsets from %d sessions", len(frequent), n_sessions)
    return FrequentItemsets(frequent, counted, params)


def generate_rules(itemsets: FrequentItemsets, params: Optional[MiningParams] = None,
                   page_weights: Optional[PageWeightTable] = None) -> RuleBase:
    """
    Emit every rule (Z - {p}) => p from frequent itemsets Z with |Z| >= 2

    wconf = wsupport(Z) / wsupport(Z - {p}), capped at 1; rules below
    min_wconf are dropped. The result is sorted by (wconf desc, wsupport desc,
    body, head).
    """
    params = params or itemsets.params
    rules = []
    for itemset, support in itemsets:
        if len(itemset) < 2:
            continue
        for head in itemset:
            body = tuple(p for p in itemset if p != head)
            body_support = itemsets.wsupport_of(body)
            assert body_support is not None, f"body {body} of {itemset} was never counted"
            if body_support <= 0:
                # body pages all weigh 0: confidence is undefined
                continue
            wconf = min(1.0, support / body_support)
            if wconf >= params.min_wconf:
                rules.append(WeightedRule(body=body, head=head, wsupport=support, wconf=wconf))

    rules.sort(key=rule_sort_key)
    logger.info("Generated %d weighted rules", len(rules))
    return RuleBase(rules=tuple(rules), page_weights=page_weights)
