"""
Test utilities and helpers.
"""
import random
from typing import List

from symcomplex.services.words import Alphabet, Word


def word_of(text: str, alphabet: str = None) -> Word:
    """Word from text, over ``alphabet`` when given."""
    return Word.from_text(text, Alphabet.of(alphabet) if alphabet else None)


def random_words(count: int, length: int, seed: int = 0, alphabet: str = "01") -> List[Word]:
    """Seeded random words over ``alphabet``."""
    rng = random.Random(seed)
    letters = Alphabet.of(alphabet)
    return [Word(letters, tuple(rng.randrange(letters.size) for _ in range(length))) for _ in range(count)]


def assert_close(actual: float, expected: float, tol: float, label: str = ""):
    """Assert |actual - expected| <= tol with a readable message."""
    assert abs(actual - expected) <= tol, f"{label or 'value'}: {actual} differs from {expected} by more than {tol}"
