"""warmrec - Hybrid web-page recommender built on weighted association rules"""

__version__ = "1.0.0"
__author__ = "Paul Yang"

from . import config
from .config import Config
from .cli import parse_args
from .logparse import SessionLog, SiteMap, read_usage_log, read_sitemap, sessionize
from .pageweight import PageWeightTable, build_weight_table
from .warm import WeightedRule, RuleBase, mine_weighted_itemsets, generate_rules
from .cluster import Clustering, agglomerative_cluster
from .hits import hits_iterate
from .textmine import TfIdfIndex, build_index
from .recommender import ActiveSession, RecommendationSet, recommend, recommend_pages
from .model import ModelBundle, train_model, save_model, load_model
from .evaluation import EvalReport, evaluate, make_cases
from .validators import ValidationError, ConfigValidator
from .output import OutputManager
from .utils import ConsoleLogger

__all__ = [
    "config",
    "Config",
    "parse_args",
    "SessionLog",
    "SiteMap",
    "read_usage_log",
    "read_sitemap",
    "sessionize",
    "PageWeightTable",
    "build_weight_table",
    "WeightedRule",
    "RuleBase",
    "mine_weighted_itemsets",
    "generate_rules",
    "Clustering",
    "agglomerative_cluster",
    "hits_iterate",
    "TfIdfIndex",
    "build_index",
    "ActiveSession",
    "RecommendationSet",
    "recommend",
    "recommend_pages",
    "ModelBundle",
    "train_model",
    "save_model",
    "load_model",
    "EvalReport",
    "evaluate",
    "make_cases",
    "ValidationError",
    "ConfigValidator",
    "OutputManager",
    "ConsoleLogger",
]
