"""Shared fixtures for warmrec tests"""

import pytest

from warmrec.logparse import Session, SessionLog, SiteMap, Visit
from warmrec.synthgen import SynthSpec


def build_log(page_lists, step=10.0):
    """SessionLog with sessions s1, s2, ... visiting pages step seconds apart"""
    sessions = []
    for index, pages in enumerate(page_lists, start=1):
        visits = tuple(Visit(page, i * step, step) for i, page in enumerate(pages))
        sessions.append(Session(session_id=f"s{index}", visits=visits))
    return SessionLog.from_sessions(sessions)


@pytest.fixture
def make_log():
    return build_log


@pytest.fixture
def make_sitemap():
    def factory(links, sizes=None):
        pages = set(links)
        for targets in links.values():
            pages |= set(targets)
        return SiteMap.from_dict({
            "pages": {
                p: {"size": (sizes or {}).get(p, 100), "outlinks": sorted(links.get(p, ()))}
                for p in sorted(pages)
            }
        })
    return factory


@pytest.fixture
def grouped_spec():
    """Three disjoint 4-page co-visit groups, each with its own vocabulary"""
    def factory(seed=0, noise=0.0):
        groups = (
            ("/news/a", "/news/b", "/news/c", "/news/d"),
            ("/shop/a", "/shop/b", "/shop/c", "/shop/d"),
            ("/help/a", "/help/b", "/help/c", "/help/d"),
        )
        vocab = {"/news": ("election", "senate"), "/shop": ("basket", "price"), "/help": ("faq", "support")}
        texts = {p: vocab[p.rsplit("/", 1)[0]] for g in groups for p in g}
        return SynthSpec(
            page_count=12,
            session_count=60,
            cluster_blueprint=groups,
            text_blueprint=texts,
            rng_seed=seed,
            noise_rate=noise,
            filler_terms_per_page=0,
        )
    return factory
