"""Minimal inverted-index BM25 retrieval over a local corpus.

This exists so the pipeline can produce scored candidate lists without an
external engine; run files from any other system are equally accepted.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

_TOKEN = re.compile(r"[a-z0-9]+")


class RetrievalError(ValueError):
    """Corpus or index input is invalid."""


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric characters, drop empty tokens."""
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class Index:
    """Immutable inverted index: per-term postings plus length statistics."""

    postings: Mapping[str, tuple[tuple[str, int], ...]]
    doc_lengths: Mapping[str, int]
    avg_doc_length: float
    doc_count: int


def build_index(corpus: Iterable[tuple[str, str]]) -> Index:
    """Index (doc_id, text) pairs. Duplicate doc_ids and empty corpora are
    rejected; postings are sorted by doc_id per term."""
    doc_lengths: dict[str, int] = {}
    term_counts: dict[str, dict[str, int]] = {}
    for doc_id, text in corpus:
        if doc_id in doc_lengths:
            raise RetrievalError(f"duplicate doc_id: {doc_id}")
        tokens = tokenize(text)
        doc_lengths[doc_id] = len(tokens)
        for token in tokens:
            counts = term_counts.setdefault(token, {})
            counts[doc_id] = counts.get(doc_id, 0) + 1
    if not doc_lengths:
        raise RetrievalError("empty corpus")
    postings = {
        term: tuple(sorted(counts.items()))
        for term, counts in term_counts.items()
    }
    return Index(
        postings=postings,
        doc_lengths=doc_lengths,
        avg_doc_length=sum(doc_lengths.values()) / len(doc_lengths),
        doc_count=len(doc_lengths),
    )


def bm25_rank(
    index: Index,
    query: str,
    k: int,
    *,
    k1: float = 1.2,
    b: float = 0.75,
) -> list[tuple[str, float]]:
    """Top-k documents for a query, scored with BM25.

    idf uses the +1-smoothed log so scores stay nonnegative on tiny corpora.
    Ties are broken by ascending doc_id; only documents containing at least
    one query token are returned, so an empty query yields an empty list.
    """
    if k < 1:
        raise RetrievalError(f"k must be >= 1, got {k}")
    scores: dict[str, float] = {}
    n_docs = index.doc_count
    for token in tokenize(query):
        token_postings = index.postings.get(token)
        if not token_postings:
            continue
        df = len(token_postings)
        idf = math.log((n_docs - df + 0.5) / (df + 0.5) + 1.0)
        for doc_id, tf in token_postings:
            norm = k1 * (1.0 - b + b * index.doc_lengths[doc_id] / index.avg_doc_length)
            scores[doc_id] = scores.get(doc_id, 0.0) + idf * tf * (k1 + 1.0) / (tf + norm)
    ranked = sorted(scores.items(), key=lambda pair: (-pair[1], pair[0]))
    return ranked[:k]


def save_index(index: Index, path: str | Path) -> None:
    payload = {
        "postings": {term: list(map(list, plist)) for term, plist in index.postings.items()},
        "doc_lengths": dict(index.doc_lengths),
        "avg_doc_length": index.avg_doc_length,
        "doc_count": index.doc_count,
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_index(path: str | Path) -> Index:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return Index(
        postings={
            term: tuple((doc_id, int(tf)) for doc_id, tf in plist)
            for term, plist in payload["postings"].items()
        },
        doc_lengths={doc_id: int(n) for doc_id, n in payload["doc_lengths"].items()},
        avg_doc_length=float(payload["avg_doc_length"]),
        doc_count=int(payload["doc_count"]),
    )
