import pytest

from cbir.builder import build_index
from cbir.config import EngineConfig
from cbir.synth import generate_corpus


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return generate_corpus(root, per_cell=4, seed=3, size=128)


@pytest.fixture(scope="session")
def small_index(small_corpus):
    result = build_index(small_corpus.images_dir, EngineConfig())
    assert not result.skipped
    return result.index
