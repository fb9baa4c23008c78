import os
import sys

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from fragwords.words import Word  # noqa: E402

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def words(n_gens: int = 3, max_size: int = 12, min_size: int = 0):
    return st.lists(st.integers(0, 2 * n_gens - 1), min_size=min_size, max_size=max_size).map(Word)


def reduced_words(n_gens: int = 3, max_size: int = 10):
    return words(n_gens, max_size).map(lambda w: w.free_reduce())


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the numba kernels once so timed tests measure steady state."""
    from fragwords import automata, eraser, words as W

    A = W.Alphabet.standard(3)
    t = eraser.InvEraserTuple(A, (W.EMPTY, A.parse("a"), A.parse("a")))
    eraser.witness(t)
    automata.munn_tree(A.parse("abAB"))
