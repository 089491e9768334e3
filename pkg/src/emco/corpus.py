"""Corpus ingestion, preprocessing pipeline, and one-vs-rest task building.

The pipeline applied to every document is: tokenize -> stopword removal ->
stem -> drop single-character stems -> drop stems whose total count over the
training split is at most two -> drop documents left empty. The rarity filter
is computed from training documents only and the resulting removal set is
applied to both splits, so test text can never influence the vocabulary.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .stemming import PorterStemmer

_TOKEN_RE = re.compile(r"[a-z]+")

Stemmer = Callable[[str], str]


@dataclass(frozen=True)
class RawDocument:
    """A labeled text document before preprocessing."""

    id: str
    text: str
    labels: frozenset[str]
    split: str  # "train" or "test"


@dataclass(frozen=True)
class Document:
    """A preprocessed document: an ordered sequence of lowercase tokens."""

    id: str
    tokens: tuple[str, ...]
    labels: frozenset[str]
    split: str


@dataclass(frozen=True)
class OvrTask:
    """One binary one-vs-rest classification task for a single category."""

    category: str
    train_minority: tuple[Document, ...]
    train_majority: tuple[Document, ...]
    test: tuple[Document, ...]
    minority_train_frequency: float
    evaluable: bool = True

    def test_label(self, doc: Document) -> int:
        return 1 if self.category in doc.labels else -1


def tokenize(raw_text: str) -> list[str]:
    """Lowercase and split on any non-ASCII-letter character.

    Non-ASCII letters act as separators, so e.g. accented characters break
    words apart rather than joining them.
    """
    return _TOKEN_RE.findall(raw_text.lower())


def load_corpus_jsonl(path: str | Path) -> list[RawDocument]:
    """Read a JSON-lines corpus with fields id, text, labels, split."""
    docs = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            split = obj["split"]
            if split not in ("train", "test"):
                raise ValueError(f"{path}:{lineno}: bad split {split!r}")
            docs.append(
                RawDocument(
                    id=str(obj["id"]),
                    text=str(obj["text"]),
                    labels=frozenset(str(x) for x in obj["labels"]),
                    split=split,
                )
            )
    return docs


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword list, one word per line; blank lines ignored."""
    with open(path, "r", encoding="utf-8") as handle:
        return frozenset(w.strip() for w in handle if w.strip())


def default_stopwords() -> frozenset[str]:
    """Bundled English stopword list."""
    text = resources.files("emco.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def default_stemmer() -> Stemmer:
    return PorterStemmer()


def preprocess(
    corpus: Iterable[RawDocument],
    stopwords: frozenset[str] | None = None,
    stemmer: Stemmer | None = None,
) -> list[Document]:
    """Run the full preprocessing pipeline over a corpus.

    Stopwords are matched on unstemmed surface forms. The rare-stem filter
    drops every stem with a total count of at most two over the training
    split; the same set is removed from test documents. Documents reduced to
    zero tokens are dropped.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    if stemmer is None:
        stemmer = default_stemmer()

    staged: list[tuple[RawDocument, list[str]]] = []
    train_counts: Counter[str] = Counter()
    for doc in corpus:
        stems = [
            stemmer(tok)
            for tok in tokenize(doc.text)
            if tok not in stopwords
        ]
        stems = [s for s in stems if len(s) > 1]
        staged.append((doc, stems))
        if doc.split == "train":
            train_counts.update(stems)

    rare = {stem for stem, count in train_counts.items() if count <= 2}

    out = []
    for doc, stems in staged:
        kept = tuple(s for s in stems if s not in rare and train_counts.get(s, 0) > 0)
        if kept:
            out.append(Document(doc.id, kept, doc.labels, doc.split))
    return out


def training_documents(corpus: Sequence[Document]) -> list[Document]:
    return [d for d in corpus if d.split == "train"]


def test_documents(corpus: Sequence[Document]) -> list[Document]:
    return [d for d in corpus if d.split == "test"]


def categories(corpus: Sequence[Document]) -> list[str]:
    """Sorted list of all category names in the corpus."""
    names: set[str] = set()
    for doc in corpus:
        names.update(doc.labels)
    return sorted(names)


def build_ovr_tasks(
    corpus: Sequence[Document], sampling_ratio: float
) -> list[OvrTask]:
    """Build one binary task per minority category.

    A category qualifies when its training relative frequency is strictly
    below 0.75 x sampling_ratio. Tasks whose test split lacks a positive or a
    negative document are flagged unevaluable rather than dropped.
    """
    if not 0.0 < sampling_ratio < 1.0:
        raise ValueError(f"sampling_ratio must be in (0, 1), got {sampling_ratio}")
    train = training_documents(corpus)
    test = tuple(test_documents(corpus))
    n_train = len(train)
    tasks = []
    for cat in categories(corpus):
        minority = tuple(d for d in train if cat in d.labels)
        if not n_train:
            continue
        freq = len(minority) / n_train
        if freq >= 0.75 * sampling_ratio:
            continue
        majority = tuple(d for d in train if cat not in d.labels)
        n_pos = sum(1 for d in test if cat in d.labels)
        evaluable = 0 < n_pos < len(test)
        tasks.append(
            OvrTask(
                category=cat,
                train_minority=minority,
                train_majority=majority,
                test=test,
                minority_train_frequency=freq,
                evaluable=evaluable,
            )
        )
    return tasks
