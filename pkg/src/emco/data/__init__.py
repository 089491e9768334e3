"""Bundled data files: English stopword list and the mini corpus."""

from importlib import resources
from pathlib import Path


def mini_corpus_path() -> Path:
    """Path of the bundled ~200-document evaluation corpus."""
    return Path(str(resources.files(__name__).joinpath("mini_corpus.jsonl")))


def stopwords_path() -> Path:
    return Path(str(resources.files(__name__).joinpath("stopwords_en.txt")))
