import pytest

from ragforge.corpus import Variant, build_variant
from ragforge.embedding import LocalHashEmbedder
from ragforge.retrieval import Retriever
from ragforge.synth import synthetic_courses, synthetic_info_docs


@pytest.fixture(scope="session")
def tiny_docs():
    courses = synthetic_courses(count=4, total_classes=12, seed=5)
    info = synthetic_info_docs(count=3, seed=5)
    return build_variant(courses, info, Variant.CLEAR)


@pytest.fixture(scope="session")
def tiny_retriever(tiny_docs):
    return Retriever.from_corpus(tiny_docs, LocalHashEmbedder(dim=64))
