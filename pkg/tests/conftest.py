import os
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from wordrel.corpus import parse_analogy_file
from wordrel.embeddings import EmbeddingTable, load_embeddings

TESTS = Path(__file__).parent
DATA = Path(str(resources.files("wordrel") / "data"))

# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {desc}")


@pytest.fixture(scope="session")
def google_analogies_path():
    return TESTS / "data" / "questions-words.txt"


@pytest.fixture(scope="session")
def synthetic_paths():
    return DATA / "synthetic.glove.txt", DATA / "synthetic.analogies.txt"


@pytest.fixture(scope="session")
def micro_paths():
    return DATA / "micro.glove.txt", DATA / "micro.analogies.txt"


@pytest.fixture(scope="session")
def synthetic_table(synthetic_paths):
    return load_embeddings(synthetic_paths[0])


@pytest.fixture(scope="session")
def synthetic_corpus(synthetic_paths):
    return parse_analogy_file(synthetic_paths[1])


@pytest.fixture
def planted_table():
    """Six tokens where woman - man + king lands exactly on queen."""
    man = np.array([1.0, 0.2, 0.0, 0.1])
    woman = np.array([1.0, 0.2, 1.0, 0.1])
    king = np.array([0.1, 1.0, 0.0, 0.9])
    return EmbeddingTable.from_dict({
        "man": man,
        "woman": woman,
        "king": king,
        "queen": king + (woman - man),
        "apple": np.array([-1.0, 0.3, -0.2, 0.0]),
        "car": np.array([0.0, -1.0, 0.4, 0.5]),
    })


@pytest.fixture(scope="session")
def random_table():
    rng = np.random.default_rng(7)
    words = tuple(f"w{i}" for i in range(200))
    return EmbeddingTable(words, rng.standard_normal((200, 6)))


def glove_path() -> Path | None:
    """Location of GloVe 6B 300d text vectors, if present."""
    candidates = [os.environ.get("WORDREL_GLOVE"), "~/data/glove.6B.300d.txt", "/data/glove.6B.300d.txt"]
    for c in candidates:
        if c and Path(c).expanduser().is_file():
            return Path(c).expanduser()
    return None
