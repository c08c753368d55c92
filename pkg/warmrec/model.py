"""Trained model bundle: offline training pipeline and versioned JSON persistence"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import config as defaults
from .cluster import Clustering, agglomerative_cluster, build_usage_vectors
from .config import Config
from .logparse import SessionLog, SiteMap, page_stats
from .pageweight import PageWeightTable, build_weight_table
from .textmine import DocumentCorpus, TfIdfIndex, build_index, empty_index
from .validators import ConfigValidator, EmptyUsageError, ModelFormatError, ValidationError
from .warm import MiningParams, RuleBase, generate_rules, mine_weighted_itemsets

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelBundle:
    page_weights: PageWeightTable
    rules: RuleBase
    clustering: Clustering
    sitemap: SiteMap
    tfidf: TfIdfIndex
    config: Config = field(default_factory=Config)
    format_version: int = defaults.MODEL_FORMAT_VERSION

    def summary(self) -> dict:
        return {
            "format_version": self.format_version,
            "pages": len(self.page_weights),
            "rules": len(self.rules),
            "clusters": len(self.clustering),
            "documents": len(self.tfidf),
        }

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "params": self.config.to_dict(),
            "page_weights": self.page_weights.to_dict(),
            "rules": self.rules.to_list(),
            "clustering": self.clustering.to_list(),
            "sitemap": self.sitemap.to_dict(),
            "tfidf": self.tfidf.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelBundle":
        """
        Rebuild a bundle from its JSON form

        Raises:
            ModelFormatError: On a version mismatch or missing sections
        """
        if not isinstance(data, dict):
            raise ModelFormatError("Model file must contain a JSON object")
        version = data.get("format_version")
        if version != defaults.MODEL_FORMAT_VERSION:
            raise ModelFormatError(
                f"Unsupported model format_version {version!r} "
                f"(expected {defaults.MODEL_FORMAT_VERSION})"
            )
        missing = [k for k in ("params", "page_weights", "rules", "clustering", "sitemap", "tfidf")
                   if k not in data]
        if missing:
            raise ModelFormatError(f"Model file missing sections: {', '.join(missing)}")

        page_weights = PageWeightTable.from_dict(data["page_weights"])
        try:
            cfg = ConfigValidator.validate(Config.from_dict(data["params"]))
        except (ValidationError, TypeError, ValueError, AttributeError) as e:
            raise ModelFormatError(f"Invalid model params: {e}")
        try:
            sitemap = SiteMap.from_dict(data["sitemap"])
        except (ValidationError, TypeError, ValueError, AttributeError) as e:
            raise ModelFormatError(f"Invalid model sitemap: {e}")
        return cls(
            page_weights=page_weights,
            rules=RuleBase.from_list(data["rules"], page_weights),
            clustering=Clustering.from_list(data["clustering"]),
            sitemap=sitemap,
            tfidf=TfIdfIndex.from_dict(data["tfidf"]),
            config=cfg,
            format_version=version,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def save_model(model: ModelBundle, path: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8") as f:
        f.write(model.to_json())


def load_model(path: str) -> ModelBundle:
    """
    Read a model file

    Raises:
        OSError: If the file cannot be read
        ModelFormatError: If the content is not a valid model
    """
    with open(Path(path), "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ModelFormatError(f"Model file is not valid JSON: {e}")
    return ModelBundle.from_dict(data)


def train_model(log: SessionLog, site: SiteMap, corpus: Optional[DocumentCorpus] = None,
                cfg: Optional[Config] = None) -> ModelBundle:
    """
    Offline pipeline: page stats -> weights -> weighted rules -> usage clusters -> TF-IDF

    Args:
        log: Training sessions
        site: Site structure (sizes and links)
        corpus: Page texts; None trains an empty text index
        cfg: Thresholds (defaults when None)

    Raises:
        EmptyUsageError: If the log has no sessions
    """
    cfg = cfg or Config()
    if len(log) == 0:
        raise EmptyUsageError()

    stats = page_stats(log, site)
    weights = build_weight_table(stats)

    params = MiningParams(cfg.min_wsupport, cfg.min_wconf, cfg.max_itemset_size)
    itemsets = mine_weighted_itemsets(log, weights, params)
    rules = generate_rules(itemsets, params, page_weights=weights)

    clustering = agglomerative_cluster(build_usage_vectors(log, weights), cfg.cluster_threshold)
    index = build_index(corpus) if corpus is not None and corpus.docs else empty_index()

    # the saved sitemap must cover every page the pipeline may rank
    covered = site.covering(weights.pages)

    logger.info("Trained model: %d pages, %d rules, %d clusters", len(weights), len(rules), len(clustering))
    return ModelBundle(page_weights=weights, rules=rules, clustering=clustering,
                       sitemap=covered, tfidf=index, config=cfg)
