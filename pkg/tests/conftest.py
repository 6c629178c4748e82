"""
Pytest configuration and fixtures.
"""
import pytest

from symcomplex.services.generators import FIBONACCI, MORSE, fixed_point
from symcomplex.services.subshift import Sft, named

MODULE_MARKERS = {
    "test_words": "words",
    "test_generators": "generators",
    "test_subshift": "subshift",
    "test_complexity": "complexity",
    "test_intricacy": "intricacy",
    "test_markov": "markov",
    "test_optimizer": "optimizer",
    "test_cli": "cli",
    "test_config": "config",
}


@pytest.fixture
def golden() -> Sft:
    """Golden mean shift (no 11)."""
    return named("golden")


@pytest.fixture
def full2() -> Sft:
    return named("full2")


@pytest.fixture
def period2() -> Sft:
    return named("period2")


@pytest.fixture
def fibonacci_word():
    """Fibonacci fixed point prefix, long enough for n <= 30."""
    return fixed_point(FIBONACCI, "0", 2000)


@pytest.fixture
def morse_word():
    return fixed_point(MORSE, "0", 4096)


# Module markers for selective runs (pytest -m markov)
def pytest_collection_modifyitems(config, items):
    """Add module markers to tests based on the file name."""
    for item in items:
        module = item.nodeid.split("::")[0].rsplit("/", 1)[-1].removesuffix(".py")
        marker = MODULE_MARKERS.get(module)
        if marker:
            item.add_marker(getattr(pytest.mark, marker))
