import pytest

from emco import corpus
from emco.data import mini_corpus_path


@pytest.fixture(scope="session")
def mini_path():
    return str(mini_corpus_path())


@pytest.fixture(scope="session")
def mini_docs(mini_path):
    return corpus.preprocess(corpus.load_corpus_jsonl(mini_path))


def make_raw(id, text, labels=("x",), split="train"):
    return corpus.RawDocument(
        id=id, text=text, labels=frozenset(labels), split=split
    )
