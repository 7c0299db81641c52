import numpy as np
import pytest
from hypothesis import settings

from jgeo.algebra import AlgebraShape, Element

settings.register_profile("jgeo", deadline=None, max_examples=50)
settings.load_profile("jgeo")

_ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one acceptance line: ``record(number, title, passed, detail)``."""

    def _record(number, title, passed, detail=""):
        _ACCEPTANCE[number] = (title, bool(passed), detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({detail})")


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def qubit():
    return AlgebraShape((2,))


@pytest.fixture
def paulis():
    x = Element.from_blocks([[0, 1], [1, 0]])
    y = Element.from_blocks([[0, -1j], [1j, 0]])
    z = Element.from_blocks([[1, 0], [0, -1]])
    return x, y, z
