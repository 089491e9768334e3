"""Bag-of-words tf-idf vectorization with smoothed idf and L2 normalization.

The model is fitted once on the original training documents and the same
fitted transformation is reused for synthetic documents, so identical tokens
always map to identical columns.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .corpus import Document


@dataclass(frozen=True)
class SparseVector:
    """Sorted sparse vector: (index, value) pairs, strictly increasing indices."""

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        indices = [i for i, _ in self.entries]
        if indices != sorted(set(indices)):
            raise ValueError("entries must be sorted by strictly increasing index")
        if any(v == 0.0 for _, v in self.entries):
            raise ValueError("entries must be nonzero")

    @property
    def indices(self) -> list[int]:
        return [i for i, _ in self.entries]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.entries]

    def norm(self) -> float:
        return math.sqrt(sum(v * v for _, v in self.entries))

    def to_dense(self, dim: int) -> np.ndarray:
        out = np.zeros(dim)
        for i, v in self.entries:
            out[i] = v
        return out

    @staticmethod
    def from_dense(arr: np.ndarray, tol: float = 0.0) -> "SparseVector":
        entries = tuple(
            (int(i), float(v)) for i, v in enumerate(arr) if abs(v) > tol
        )
        return SparseVector(entries)


@dataclass(frozen=True)
class TfidfModel:
    """Fitted vocabulary index, document frequencies, and training size."""

    vocabulary: dict[str, int]  # token -> column, lexicographic order
    df: dict[str, int]
    n_docs: int

    @property
    def n_features(self) -> int:
        return len(self.vocabulary)

    def idf(self, token: str) -> float:
        return math.log((self.n_docs + 1) / (self.df[token] + 1)) + 1.0


def fit_tfidf(training_docs: Sequence[Document]) -> TfidfModel:
    """Fit vocabulary and document frequencies on the training split."""
    if not training_docs:
        raise ValueError("cannot fit tf-idf on an empty training set")
    df: Counter[str] = Counter()
    for doc in training_docs:
        df.update(set(doc.tokens))
    vocab = {tok: col for col, tok in enumerate(sorted(df))}
    return TfidfModel(vocabulary=vocab, df=dict(df), n_docs=len(training_docs))


def transform_tokens(tokens: Iterable[str], model: TfidfModel) -> SparseVector:
    """tf x idf then L2 normalization; out-of-vocabulary tokens are dropped."""
    counts = Counter(t for t in tokens if t in model.vocabulary)
    if not counts:
        return SparseVector(())
    entries = sorted(
        (model.vocabulary[t], c * model.idf(t)) for t, c in counts.items()
    )
    norm = math.sqrt(sum(v * v for _, v in entries))
    return SparseVector(tuple((i, v / norm) for i, v in entries))


def transform(doc: Document, model: TfidfModel) -> SparseVector:
    return transform_tokens(doc.tokens, model)


def to_csr(vectors: Sequence[SparseVector], n_features: int) -> sparse.csr_matrix:
    """Stack sparse vectors into a CSR matrix."""
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for vec in vectors:
        for i, v in vec.entries:
            indices.append(i)
            data.append(v)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (data, indices, indptr), shape=(len(vectors), n_features)
    )


def to_dense(vectors: Sequence[SparseVector], n_features: int) -> np.ndarray:
    return np.vstack([v.to_dense(n_features) for v in vectors]) if vectors else (
        np.zeros((0, n_features))
    )


def dump_vectors(
    path: str | Path, ids: Sequence[str], vectors: Sequence[SparseVector]
) -> None:
    """Write one line per document: id followed by index:value pairs."""
    with open(path, "w", encoding="utf-8") as handle:
        for doc_id, vec in zip(ids, vectors):
            pairs = " ".join(f"{i}:{v:.12g}" for i, v in vec.entries)
            handle.write(f"{doc_id} {pairs}".rstrip() + "\n")
