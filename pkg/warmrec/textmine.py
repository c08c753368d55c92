"""TF-IDF indexing of page text and relevance scoring"""

import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Mapping, Optional
from urllib.parse import unquote

from . import config
from .logparse import normalize_page
from .validators import ModelFormatError, ValidationError

logger = logging.getLogger(__name__)

TOKEN_PATTERN = re.compile(r"[^\W_]+")


def tokenize(text: str, stopwords: Iterable[str] = config.DEFAULT_STOPWORDS) -> Counter:
    """
    Lowercase, split on non-alphanumerics, drop short tokens and stopwords

    Returns:
        Token multiset
    """
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    tokens = TOKEN_PATTERN.findall((text or "").lower())
    return Counter(t for t in tokens if len(t) >= 2 and t not in stop)


@dataclass(frozen=True)
class DocumentCorpus:
    docs: Dict[str, Counter]

    @property
    def vocabulary(self) -> FrozenSet[str]:
        return frozenset(term for tokens in self.docs.values() for term in tokens)

    @property
    def doc_count(self) -> int:
        return len(self.docs)

    @classmethod
    def from_texts(cls, texts: Mapping[str, str],
                   stopwords: Iterable[str] = config.DEFAULT_STOPWORDS) -> "DocumentCorpus":
        stop = frozenset(stopwords)
        return cls(docs={normalize_page(page): tokenize(text, stop) for page, text in texts.items()})


def read_corpus(path: str, stopwords: Iterable[str] = config.DEFAULT_STOPWORDS) -> DocumentCorpus:
    """
    Load page texts from a JSON map page -> text, or from a directory of
    plain-text files named by URL-encoded page identifier

    Raises:
        OSError: If the path cannot be read
        ValidationError: If the JSON is not a map of strings
    """
    source = Path(path)
    if source.is_dir():
        texts = {}
        for file in sorted(source.iterdir()):
            if not file.is_file():
                continue
            name = file.name[:-4] if file.name.endswith(".txt") else file.name
            texts[unquote(name)] = file.read_text(encoding="utf-8", errors="replace")
    else:
        with open(source, "r", encoding="utf-8") as f:
            try:
                texts = json.load(f)
            except json.JSONDecodeError as e:
                raise ValidationError(f"Corpus JSON is invalid: {e}")
        if not isinstance(texts, dict) or not all(isinstance(v, str) for v in texts.values()):
            raise ValidationError("Corpus JSON must map page identifiers to text")
    return DocumentCorpus.from_texts(texts, stopwords)


@dataclass(frozen=True)
class TfIdfIndex:
    tf: Dict[str, Dict[str, float]]
    idf: Dict[str, float]
    term_counts: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def __contains__(self, page: str) -> bool:
        return page in self.tf

    def __len__(self) -> int:
        return len(self.tf)

    def to_dict(self) -> dict:
        return {
            "idf": {t: self.idf[t] for t in sorted(self.idf)},
            "term_counts": {p: dict(sorted(self.term_counts[p].items())) for p in sorted(self.term_counts)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TfIdfIndex":
        """Rebuild from stored counts; tf is recomputed, idf is taken as stored"""
        try:
            counts = {p: {t: int(c) for t, c in terms.items()} for p, terms in data["term_counts"].items()}
            idf = {t: float(v) for t, v in data["idf"].items()}
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise ModelFormatError(f"Invalid TF-IDF index: {e}")
        return cls(tf={p: _max_normalized(c) for p, c in counts.items()}, idf=idf, term_counts=counts)


def _max_normalized(counts: Mapping[str, int]) -> Dict[str, float]:
    top = max(counts.values(), default=0)
    if top <= 0:
        return {}
    return {term: count / top for term, count in counts.items()}


def build_index(corpus: DocumentCorpus) -> TfIdfIndex:
    """
    tf = count / largest term count in the document; idf = ln(N / df)

    An empty corpus yields an empty index.
    """
    document_frequency: Counter = Counter()
    for tokens in corpus.docs.values():
        document_frequency.update(set(tokens))

    n = corpus.doc_count
    idf = {term: math.log(n / df) for term, df in document_frequency.items()}
    tf = {page: _max_normalized(tokens) for page, tokens in corpus.docs.items()}
    counts = {page: dict(tokens) for page, tokens in corpus.docs.items()}
    logger.info("Indexed %d documents, %d terms", n, len(idf))
    return TfIdfIndex(tf=tf, idf=idf, term_counts=counts)


def tfidf_score(index: TfIdfIndex, page: str, query_terms: Mapping[str, int]) -> float:
    """Raw score: sum of tf * idf * query multiplicity; 0 for unindexed pages"""
    weights = index.tf.get(page)
    if not weights:
        return 0.0
    return sum(weights.get(term, 0.0) * index.idf.get(term, 0.0) * count
               for term, count in sorted(query_terms.items()))


def tfidf_scores(index: TfIdfIndex, pages: Iterable[str], query_terms: Mapping[str, int]) -> Dict[str, float]:
    """Scores for a batch of pages, divided by the batch maximum (all 0 if it is 0)"""
    raw = {page: tfidf_score(index, page, query_terms) for page in sorted(set(pages))}
    top = max(raw.values(), default=0.0)
    if top <= 0:
        return {page: 0.0 for page in raw}
    return {page: score / top for page, score in raw.items()}


def session_query(index: TfIdfIndex, pages: Iterable[str]) -> Counter:
    """Query multiset: the concatenated tokens of the session's pages"""
    query: Counter = Counter()
    for page in pages:
        query.update(index.term_counts.get(page, {}))
    return query


def empty_index() -> TfIdfIndex:
    return TfIdfIndex(tf={}, idf={})


def load_corpus(path: Optional[str], stopwords: Iterable[str] = config.DEFAULT_STOPWORDS) -> DocumentCorpus:
    if not path:
        return DocumentCorpus(docs={})
    return read_corpus(path, stopwords)
