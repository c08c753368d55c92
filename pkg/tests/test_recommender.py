"""Unit tests for recommender module"""

import math
from dataclasses import replace
from itertools import product

import numpy as np
import pytest
from warmrec.cluster import Clustering
from warmrec.config import Config
from warmrec.logparse import SiteMap
from warmrec.model import ModelBundle
from warmrec.pageweight import PageWeightTable
from warmrec.recommender import (
    MODE_RULES,
    PROVENANCE_CLUSTER,
    PROVENANCE_SEED,
    ActiveSession,
    dissimilarity,
    extend_with_clusters,
    match_score,
    recommend,
    recommend_pages,
    seed_recommendations,
)
from warmrec.textmine import DocumentCorpus, build_index, empty_index
from warmrec.warm import RuleBase, WeightedRule


def weights_of(values):
    return PageWeightTable(dict(values), dict(values), dict(values))


def rule(body, head, wconf, wsupport=0.1):
    return WeightedRule(tuple(sorted(body)), head, wsupport, wconf)


def bundle(rules, weights, clustering=None, sitemap=None, texts=None, cfg=None):
    return ModelBundle(
        page_weights=weights_of(weights),
        rules=RuleBase(rules=tuple(rules)),
        clustering=clustering or Clustering.from_clusters([]),
        sitemap=sitemap or SiteMap.empty(),
        tfidf=build_index(DocumentCorpus.from_texts(texts)) if texts else empty_index(),
        config=cfg or Config(),
    )


class TestActiveSession:
    """Test session vector construction"""

    def test_zero_weight_rejected(self):
        with pytest.raises(ValueError, match="must be positive"):
            ActiveSession(weights={"/a": 0.0})

    def test_from_pages(self):
        session = ActiveSession.from_pages(["/a", "/cold", "/new"], weights_of({"/a": 0.4, "/cold": 0.0}))
        assert session.weights == {"/a": 0.4}
        assert session.pages == frozenset({"/a", "/cold", "/new"})


class TestDissimilarity:
    """Test the rule-to-session distance and match score"""

    def setup_method(self):
        self.weights = weights_of({"/a": 0.8, "/b": 0.4, "/c": 0.5})
        self.rule = rule(["/a", "/b"], "/c", 0.9)

    def test_scaled_form(self):
        session = ActiveSession(weights={"/a": 0.2, "/b": 0.6})
        assert dissimilarity(session, self.rule, self.weights) == pytest.approx(1.6)

    def test_plain_form(self):
        session = ActiveSession(weights={"/a": 0.2, "/b": 0.6})
        assert dissimilarity(session, self.rule, self.weights, "plain") == pytest.approx(0.8)

    def test_identical_weights(self):
        session = ActiveSession(weights={"/a": 0.8, "/b": 0.4})
        assert dissimilarity(session, self.rule, self.weights) == 0.0
        assert match_score(session, self.rule, self.weights) == 1.0

    def test_half_match(self):
        weights = weights_of({"/a": 0.5, "/b": 0.5})
        session = ActiveSession(weights={"/b": 0.5})
        r = rule(["/a", "/b"], "/c", 0.9)
        assert dissimilarity(session, r, weights) == pytest.approx(2.0)
        assert match_score(session, r, weights) == pytest.approx(0.75)

    def test_zero_denominator_skipped(self):
        session = ActiveSession(weights={})
        r = rule(["/z"], "/c", 0.9)
        assert dissimilarity(session, r, weights_of({"/z": 0.0})) == 0.0

    def test_per_page_term_bounded_by_four(self):
        grid = np.linspace(0.0, 1.0, 21)
        for w_s, w_r in product(grid, grid):
            session = ActiveSession(weights={"/a": float(w_s)} if w_s > 0 else {})
            value = dissimilarity(session, rule(["/a"], "/h", 1.0), weights_of({"/a": float(w_r)}))
            assert 0.0 <= value <= 4.0 + 1e-12
            score = match_score(session, rule(["/a"], "/h", 1.0), weights_of({"/a": float(w_r)}))
            assert 0.0 <= score <= 1.0


class TestSeedRecommendations:
    """Test rule matching and seed selection"""

    def test_full_match_scores_wconf(self):
        weights = weights_of({"/a": 0.5, "/b": 0.5})
        seed = seed_recommendations(ActiveSession(weights={"/a": 0.5}), RuleBase(rules=(rule(["/a"], "/b", 0.8),)),
                                    weights, 5)
        assert [(s.rule.head, s.rec_score) for s in seed] == [("/b", pytest.approx(0.8))]

    def test_visited_heads_skipped(self):
        weights = weights_of({"/a": 0.5, "/b": 0.5})
        rules = RuleBase(rules=(rule(["/a"], "/b", 0.8), rule(["/b"], "/a", 0.8)))
        session = ActiveSession(weights={"/a": 0.5, "/b": 0.5})
        assert seed_recommendations(session, rules, weights, 5) == []

    def test_best_rule_per_head(self):
        weights = weights_of({"/a": 0.5, "/b": 0.5, "/c": 0.5})
        rules = RuleBase(rules=(rule(["/a"], "/c", 0.4), rule(["/b"], "/c", 0.9)))
        seed = seed_recommendations(ActiveSession(weights={"/a": 0.5, "/b": 0.5}), rules, weights, 5)
        assert len(seed) == 1
        assert seed[0].rule.body == ("/b",)

    def test_brute_force_top_three(self):
        weights = {"/a": 0.9, "/b": 0.3, "/c": 0.6, "/h1": 0.2, "/h2": 0.7, "/h3": 0.4, "/h4": 0.5, "/h5": 0.1}
        rules = [
            rule(["/a"], "/h1", 0.9),
            rule(["/a", "/b"], "/h2", 0.7),
            rule(["/c"], "/h3", 0.95),
            rule(["/b", "/c"], "/h4", 0.6),
            rule(["/a", "/c"], "/h5", 0.8),
        ]
        session = ActiveSession(weights={"/a": 0.5, "/c": 0.6})

        def expected_rec(r):
            total = 0.0
            for page in r.body:
                w_s, w_r = session.weight(page), weights[page]
                total += (2 * (w_s - w_r)) ** 2 / (w_s + w_r)
            return (1 - math.sqrt(total / len(r.body)) / 4) * r.wconf

        ranked = sorted(rules, key=lambda r: (-expected_rec(r), r.head))[:3]
        seed = seed_recommendations(session, RuleBase(rules=tuple(rules)), weights_of(weights), 3)
        assert [s.rule.head for s in seed] == [r.head for r in ranked]
        for scored, r in zip(seed, ranked):
            assert scored.rec_score == pytest.approx(expected_rec(r), abs=1e-12)

    def test_bad_n(self):
        with pytest.raises(ValueError, match="must be positive"):
            seed_recommendations(ActiveSession(weights={}), RuleBase(rules=()), weights_of({}), 0)


class TestExtendWithClusters:
    """Test cluster-based candidate expansion"""

    def setup_method(self):
        self.clustering = Clustering.from_clusters([["/b", "/c"], ["/a", "/d"]])
        weights = weights_of({"/a": 0.5, "/b": 0.5, "/e": 0.5})
        rules = RuleBase(rules=(rule(["/a"], "/b", 0.8), rule(["/a"], "/e", 0.6)))
        self.seed = seed_recommendations(ActiveSession(weights={"/a": 0.5}), rules, weights, 5)

    def test_cluster_members_added(self):
        assert extend_with_clusters(self.seed, self.clustering) == {"/b", "/c", "/e"}

    def test_session_pages_excluded(self):
        assert extend_with_clusters(self.seed, self.clustering, exclude={"/c"}) == {"/b", "/e"}

    def test_empty_seed(self):
        assert extend_with_clusters([], self.clustering) == set()


class TestRecommend:
    """Test the full online pipeline"""

    def test_single_rule(self):
        model = bundle([rule(["/a"], "/b", 0.8)], {"/a": 0.5, "/b": 0.5})
        result = recommend_pages(["/a"], model, 5)
        assert result.pages == ["/b"]
        item = result.items[0]
        assert item.rec_score == pytest.approx(0.8)
        assert item.hub_score == 0.0
        assert item.text_score == 0.0
        assert item.final_score == pytest.approx(0.8 / 3)
        assert item.provenance == PROVENANCE_SEED

    def test_text_breaks_tie(self):
        texts = {"/a": "rocket", "/b": "garden", "/c": "rocket"}
        model = bundle([rule(["/a"], "/b", 0.8), rule(["/a"], "/c", 0.8)], {p: 0.5 for p in texts}, texts=texts)
        assert recommend_pages(["/a"], model, 5).pages == ["/c", "/b"]

    def test_page_name_breaks_full_tie(self):
        model = bundle([rule(["/a"], "/c", 0.8), rule(["/a"], "/b", 0.8)], {"/a": 0.5, "/b": 0.5, "/c": 0.5})
        assert recommend_pages(["/a"], model, 5).pages == ["/b", "/c"]

    def test_cold_page_via_cluster(self):
        model = bundle([rule(["/a"], "/b", 0.8)], {"/a": 0.5, "/b": 0.5})
        model = replace(model, clustering=Clustering.from_clusters([["/b", "/z"]]))
        result = recommend_pages(["/a"], model, 5)
        cold = {item.page: item for item in result.items}["/z"]
        assert cold.rec_score == 0.0
        assert cold.provenance == PROVENANCE_CLUSTER
        assert cold.has_text is False

    def test_empty_rule_base(self):
        result = recommend_pages(["/a"], bundle([], {"/a": 0.5}), 5)
        assert len(result) == 0
        assert "empty rule base" in result.trace["diagnostics"]
        assert "empty candidate set" in result.trace["diagnostics"]

    def test_stage_by_stage(self, make_sitemap):
        pages = ["/a", "/b", "/c", "/d", "/e", "/f", "/g", "/h"]
        rules = [
            rule(["/a"], "/c", 0.9),
            rule(["/b"], "/d", 0.6),
            rule(["/a", "/b"], "/e", 0.7),
            rule(["/a"], "/b", 0.95),
        ]
        clustering = Clustering.from_clusters([["/c", "/f"], ["/d", "/g"], ["/e"], ["/h"], ["/a", "/b"]])
        sitemap = make_sitemap({"/c": ["/d", "/g"], "/f": ["/d"], "/e": ["/c"], "/h": ["/a"]})
        texts = {
            "/a": "rocket launch", "/b": "rocket", "/c": "rocket orbit", "/d": "garden",
            "/e": "launch pad", "/f": "orbit", "/h": "garden",
        }
        model = bundle(rules, {p: 0.5 for p in pages}, clustering, sitemap, texts)
        result = recommend_pages(["/a", "/b"], model, 8)

        assert [s["head"] for s in result.trace["seed"]] == ["/c", "/e", "/d"]
        assert result.trace["candidates"] == ["/c", "/d", "/e", "/f", "/g"]
        assert result.trace["hits"]["edges"] == 4
        assert "no text for 1 candidate pages" in result.trace["diagnostics"]

        # hub mass sits on /c and /f in golden ratio; text favours /c then /e
        golden = (1 + math.sqrt(5)) / 2
        text_e = math.log(7 / 2) / (2 * math.log(7 / 3))
        expected = {
            "/c": (1.0 + 1.0 + 0.9) / 3,
            "/e": (0.0 + text_e + 0.7) / 3,
            "/f": (1 / golden) / 3,
            "/d": 0.6 / 3,
            "/g": 0.0,
        }
        assert result.pages == ["/c", "/e", "/f", "/d", "/g"]
        for item in result.items:
            assert item.final_score == pytest.approx(expected[item.page], abs=1e-6)
        assert {i.page: i.provenance for i in result.items}["/f"] == PROVENANCE_CLUSTER

    def test_rules_mode(self, make_sitemap):
        model = bundle([rule(["/a"], "/b", 0.6), rule(["/a"], "/c", 0.9)], {"/a": 0.5, "/b": 0.5, "/c": 0.5},
                       Clustering.from_clusters([["/b", "/x"]]), make_sitemap({"/x": ["/b"]}))
        result = recommend_pages(["/a"], model, 5, mode=MODE_RULES)
        assert result.pages == ["/c", "/b"]
        assert [i.final_score for i in result.items] == [pytest.approx(0.9), pytest.approx(0.6)]
        assert "candidates" not in result.trace

    def test_never_recommends_visited(self):
        model = bundle([rule(["/a"], "/b", 0.8), rule(["/b"], "/a", 0.8), rule(["/a"], "/c", 0.5)],
                       {"/a": 0.5, "/b": 0.5, "/c": 0.5}, Clustering.from_clusters([["/a", "/b", "/c"]]))
        result = recommend_pages(["/a", "/b"], model, 5)
        assert result.pages == ["/c"]

    def test_top_n_and_determinism(self):
        rules = [rule(["/a"], f"/h{i}", 0.5 + i / 20) for i in range(6)]
        model = bundle(rules, {"/a": 0.5, **{f"/h{i}": 0.5 for i in range(6)}})
        first = recommend_pages(["/a"], model, 3)
        second = recommend_pages(["/a"], model, 3)
        assert first.pages == ["/h5", "/h4", "/h3"]
        assert first.to_json() == second.to_json()

    def test_invalid_arguments(self):
        model = bundle([], {"/a": 0.5})
        with pytest.raises(ValueError, match="must be positive"):
            recommend_pages(["/a"], model, 0)
        with pytest.raises(ValueError, match="mode must be one of"):
            recommend_pages(["/a"], model, 3, mode="magic")

    def test_seed_size_limits_candidates(self):
        rules = [rule(["/a"], f"/h{i}", 0.5 + i / 20) for i in range(6)]
        model = bundle(rules, {"/a": 0.5, **{f"/h{i}": 0.5 for i in range(6)}}, cfg=Config(seed_size=2))
        result = recommend(ActiveSession.from_pages(["/a"], model.page_weights), model, 10)
        assert result.pages == ["/h5", "/h4"]
