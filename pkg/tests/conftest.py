import os
from pathlib import Path

import pytest

from querynet.wordnet import load_wordnet

DATA_DIR = Path(__file__).parent / "data"
MINI_WORDNET = DATA_DIR / "wordnet_mini"
SAMPLE_LOG = DATA_DIR / "sample_queries.txt"


def wordnet_dir() -> Path:
    """Directory holding the database used by the suite.

    A full WordNet 3.0 installation can be supplied through the
    QUERYNET_WORDNET_DIR environment variable; by default the bundled
    miniature database (same file format, hand-built taxonomy) is used.
    """
    env = os.environ.get("QUERYNET_WORDNET_DIR")
    if env:
        return Path(env)
    return MINI_WORDNET


def using_real_wordnet() -> bool:
    return os.environ.get("QUERYNET_WORDNET_DIR") is not None


@pytest.fixture(name="wordnet_dir", scope="session")
def wordnet_dir_fixture() -> Path:
    return wordnet_dir()


@pytest.fixture(scope="session")
def db():
    return load_wordnet(wordnet_dir())


@pytest.fixture(scope="session")
def mini_db():
    """Always the bundled miniature database (fixed expectations)."""
    return load_wordnet(MINI_WORDNET)


@pytest.fixture(scope="session")
def ref_wn():
    from tests.reference import RefWordNet

    return RefWordNet(wordnet_dir())


@pytest.fixture(scope="session")
def mini_ref_wn():
    from tests.reference import RefWordNet

    return RefWordNet(MINI_WORDNET)


@pytest.fixture(scope="session")
def sample_log() -> Path:
    return SAMPLE_LOG
