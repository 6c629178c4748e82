"""
Sequence generators.

Builds prefixes of the classical low-complexity sequences:
- substitution fixed points (Fibonacci, Morse, Chacon, ...)
- lower/upper mechanical words with exact integer floors
- standard sequences and characteristic words from continued fractions
- named sequences (Kolakoski, binary Champernowne, periodic, de Bruijn)

Irrational slopes are represented by continued-fraction terms whenever
possible. Floats are converted to the first convergent whose denominator
exceeds the requested length, which makes every floor exact.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, count, cycle, islice
from math import ceil, floor
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from symcomplex.exceptions import (
    InvalidInputError,
    NonProlongableError,
    ResourceBudgetError,
)
from symcomplex.schemas.generator import GeneratorSpec
from symcomplex.services.words import Alphabet, Word

Real = Union[float, int, Fraction]

LOWER = "lower"
UPPER = "upper"

# Largest intermediate word built by the literal primitivity test
MAX_IMAGE_LENGTH = 1_000_000


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    """
    Map symbol -> nonempty word, extended to words by concatenation.

    ``images[i]`` is the image of alphabet symbol ``i``.
    """

    alphabet: Alphabet
    images: Tuple[Word, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != self.alphabet.size:
            raise InvalidInputError(
                f"substitution needs one image per symbol: {len(images)} images for "
                f"{self.alphabet.size} symbols"
            )
        for symbol, image in enumerate(images):
            if not len(image):
                raise InvalidInputError(
                    f"image of {self.alphabet.label(symbol)!r} must be nonempty"
                )
            if image.alphabet != self.alphabet:
                raise InvalidInputError("substitution images must use the substitution alphabet")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_mapping(cls, images: Mapping[str, str], alphabet: Optional[Alphabet] = None) -> "Substitution":
        """Build from {"0": "01", "1": "0"}; the alphabet defaults to the sorted keys."""
        if alphabet is None:
            alphabet = Alphabet(tuple(sorted(images)))
        missing = [label for label in alphabet.symbols if label not in images]
        if missing:
            raise InvalidInputError(f"no image given for symbols {missing}")
        return cls(alphabet, tuple(Word.from_text(images[label], alphabet) for label in alphabet.symbols))

    def apply(self, w: Word) -> Word:
        data: List[int] = []
        for symbol in w.data:
            data.extend(self.images[symbol].data)
        return Word(self.alphabet, tuple(data))

    def power_image(self, symbol: int, m: int) -> Word:
        """theta^m(symbol)."""
        w = Word(self.alphabet, (symbol,))
        for _ in range(m):
            w = self.apply(w)
            if len(w) > MAX_IMAGE_LENGTH:
                raise ResourceBudgetError(
                    f"theta^{m} image exceeds {MAX_IMAGE_LENGTH} symbols",
                    length=len(w),
                )
        return w

    def incidence_matrix(self) -> np.ndarray:
        """M[a, b] = number of occurrences of b in theta(a)."""
        size = self.alphabet.size
        matrix = np.zeros((size, size), dtype=np.int64)
        for a, image in enumerate(self.images):
            for b in image.data:
                matrix[a, b] += 1
        return matrix


FIBONACCI = Substitution.from_mapping({"0": "01", "1": "0"})
MORSE = Substitution.from_mapping({"0": "01", "1": "10"})
CHACON = Substitution.from_mapping({"0": "0010", "1": "1"})


def fixed_point(s: Substitution, seed: Union[str, int], length: int) -> Word:
    """
    Prefix of length ``length`` of lim theta^k(seed).

    The seed must be prolongable: theta(seed) starts with seed and has length >= 2.
    """
    if length < 1:
        raise InvalidInputError(f"length must be >= 1, got {length}")
    symbol = s.alphabet.index(seed) if isinstance(seed, str) else int(seed)
    if not 0 <= symbol < s.alphabet.size:
        raise InvalidInputError(f"seed index {symbol} outside alphabet of size {s.alphabet.size}")
    image = s.images[symbol]
    if image.data[0] != symbol:
        raise NonProlongableError(
            f"image of seed {s.alphabet.label(symbol)!r} does not begin with the seed"
        )
    if len(image) < 2:
        raise NonProlongableError(
            f"image of seed {s.alphabet.label(symbol)!r} has length 1; the iteration never grows"
        )
    w = Word(s.alphabet, (symbol,))
    while len(w) < length:
        w = s.apply(w)
    return w[:length]


def is_primitive(s: Substitution, m_max: int, method: str = "matrix") -> bool:
    """
    Whether some m <= m_max makes theta^m(a) contain every symbol, for all a.

    method="matrix" tests positivity of powers of the incidence matrix;
    method="words" iterates the images themselves. Both give the same answer.
    """
    if m_max < 1:
        raise InvalidInputError(f"m_max must be >= 1, got {m_max}")
    return primitive_exponent(s, m_max, method=method) is not None


def primitive_exponent(s: Substitution, m_max: int, method: str = "matrix") -> Optional[int]:
    size = s.alphabet.size
    if method == "matrix":
        base = (s.incidence_matrix() > 0).astype(np.int64)
        power = np.eye(size, dtype=np.int64)
        for m in range(1, m_max + 1):
            power = ((power @ base) > 0).astype(np.int64)
            if power.all():
                return m
        return None
    if method == "words":
        for m in range(1, m_max + 1):
            if all(len(set(s.power_image(a, m).data)) == size for a in range(size)):
                return m
        return None
    raise InvalidInputError(f"unknown primitivity test {method!r}")


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

def continued_fraction(x: Real, max_terms: int = 64) -> List[int]:
    """Continued-fraction terms of ``x`` (exact for Fractions and floats)."""
    value = Fraction(x)
    terms: List[int] = []
    while len(terms) < max_terms:
        a = floor(value)
        terms.append(a)
        value -= a
        if value == 0:
            break
        value = 1 / value
    return terms


def convergents(terms: Iterable[int]) -> Iterator[Fraction]:
    """Successive convergents p_k/q_k of a (possibly infinite) term sequence."""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in terms:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield Fraction(p, q)


def periodic_cf(prefix: Sequence[int], period: Sequence[int]) -> Iterator[int]:
    """Infinite term iterator prefix, period, period, ..."""
    if not period:
        raise InvalidInputError("continued fraction period must be nonempty")
    return chain(prefix, cycle(period))


def inv_tau_squared_cf() -> Iterator[int]:
    """1/tau^2 = [0; 2, 1, 1, 1, ...]."""
    return periodic_cf([0, 2], [1])


def sqrt2_minus_1_cf() -> Iterator[int]:
    """sqrt(2) - 1 = [0; 2, 2, 2, ...]."""
    return periodic_cf([0], [2])


def rational_for_length(alpha: Union[Real, Iterable[int]], length: int) -> Fraction:
    """
    Rational slope that reproduces every floor needed for a word of ``length``.

    Fractions are returned unchanged. Floats and term sequences give the first
    convergent with denominator > length; a float that sits within float
    precision of an earlier convergent is treated as that rational.
    """
    if isinstance(alpha, Fraction) or isinstance(alpha, int):
        return Fraction(alpha)
    if isinstance(alpha, float):
        exact = Fraction(alpha)
        tolerance = Fraction(4 * 2.0 ** -52) * max(1, abs(exact))
        chosen = exact
        for c in convergents(continued_fraction(exact, max_terms=256)):
            chosen = c
            if c.denominator > length or abs(exact - c) <= tolerance:
                break
        return chosen
    chosen = None
    for c in convergents(alpha):
        chosen = c
        if c.denominator > length:
            break
    if chosen is None:
        raise InvalidInputError("continued fraction has no terms")
    return chosen


# ---------------------------------------------------------------------------
# Mechanical, standard and characteristic words
# ---------------------------------------------------------------------------

def mechanical(
    alpha: Union[Real, Iterable[int]],
    beta: Real = 0,
    length: int = 1,
    variant: str = LOWER,
) -> Word:
    """
    Lower (floor) or upper (ceiling) mechanical word of slope alpha, intercept beta.

    x_n = floor(alpha (n+1) + beta) - floor(alpha n + beta), ceilings for the
    upper variant. ``alpha`` may be a Fraction, a float or continued-fraction terms.
    """
    if length < 1:
        raise InvalidInputError(f"length must be >= 1, got {length}")
    if variant not in (LOWER, UPPER):
        raise InvalidInputError(f"variant must be 'lower' or 'upper', got {variant!r}")
    slope = rational_for_length(alpha, length)
    intercept = Fraction(beta)
    if not (0 <= slope <= 1 and 0 <= intercept <= 1):
        raise InvalidInputError(f"alpha and beta must lie in [0, 1], got {float(slope)}, {float(intercept)}")
    rounding = floor if variant == LOWER else ceil
    values = [rounding(slope * n + intercept) for n in range(length + 1)]
    data = tuple(values[n + 1] - values[n] for n in range(length))
    return Word(Alphabet.binary(), data)


def mechanical_from_cf(
    cf: Iterable[int],
    length: int,
    beta: Real = 0,
    variant: str = LOWER,
) -> Word:
    """Mechanical word whose slope is given by continued-fraction terms."""
    return mechanical(iter(cf), beta=beta, length=length, variant=variant)


@dataclass(frozen=True)
class DirectiveSequence:
    """d_1 >= 0 and d_n > 0 for n > 1."""

    d: Tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if not d:
            raise InvalidInputError("directive sequence must be nonempty")
        if d[0] < 0:
            raise InvalidInputError(f"d_1 must be >= 0, got {d[0]}")
        if any(x <= 0 for x in d[1:]):
            raise InvalidInputError(f"d_n must be > 0 for n > 1, got {d}")
        object.__setattr__(self, "d", d)

    @classmethod
    def from_continued_fraction(cls, cf: Sequence[int]) -> "DirectiveSequence":
        """alpha = [0; 1 + d_1, d_2, ...]."""
        cf = list(cf)
        _check_characteristic_cf(cf)
        return cls((cf[1] - 1,) + tuple(cf[2:]))


def standard_words(d: DirectiveSequence) -> List[Word]:
    """s_1, ..., s_N with s_{-1} = 1, s_0 = 0, s_n = s_{n-1}^{d_n} s_{n-2}."""
    binary = Alphabet.binary()
    previous, current = (1,), (0,)
    result: List[Word] = []
    for d_n in d.d:
        previous, current = current, current * d_n + previous
        result.append(Word(binary, current))
    return result


def standard_sequence(d: DirectiveSequence) -> Word:
    """The last standard word s_N of the directive sequence."""
    return standard_words(d)[-1]


def _check_characteristic_cf(cf: Sequence[int]) -> None:
    if len(cf) < 2:
        raise InvalidInputError("continued fraction needs at least [0; a_1]")
    if cf[0] != 0:
        raise InvalidInputError(f"slope must lie in (0, 1): leading term {cf[0]} != 0")
    if cf[1] < 1 or any(a <= 0 for a in cf[2:]):
        raise InvalidInputError(f"continued fraction tail entries must be positive: {list(cf)}")


def characteristic_word(cf: Iterable[int], length: int) -> Word:
    """
    Length-``length`` prefix of the characteristic word l = lim s_n.

    ``cf`` holds the terms [0; 1 + d_1, d_2, ...] (finite or infinite). Every
    standard word s_n (n >= 1) is a prefix of l.
    """
    if length < 1:
        raise InvalidInputError(f"length must be >= 1, got {length}")
    terms = iter(cf)
    head = list(islice(terms, 2))
    _check_characteristic_cf(head)
    binary = Alphabet.binary()
    previous, current = (1,), (0,)
    d_n = head[1] - 1
    steps = 0
    while True:
        previous, current = current, current * d_n + previous
        steps += 1
        if len(current) >= length:
            return Word(binary, current[:length])
        nxt = next(terms, None)
        if nxt is None:
            raise InvalidInputError(
                f"continued fraction exhausted after {steps} standard words "
                f"(prefix length {len(current)} < {length})"
            )
        if nxt <= 0:
            raise InvalidInputError(f"continued fraction tail entries must be positive, got {nxt}")
        d_n = nxt


def characteristic_word_for(alpha: float, length: int) -> Word:
    """Characteristic word of an irrational slope given as a float."""
    terms = continued_fraction(rational_for_length(alpha, length), max_terms=256)
    return characteristic_word(terms, length)


# ---------------------------------------------------------------------------
# Named sequences
# ---------------------------------------------------------------------------

def kolakoski(length: int, symbols: Tuple[int, int] = (1, 2)) -> Word:
    """
    Kolakoski word over two positive integers: the word equals its own run-length sequence.

    The default (1, 2) starts 1, 2, 2, ...
    """
    a, b = symbols
    if a == b or a < 1 or b < 1:
        raise InvalidInputError(f"Kolakoski symbols must be two distinct positive integers, got {symbols}")
    runs: List[int] = []
    current = a
    i = 0
    while len(runs) < length:
        run = runs[i] if i < len(runs) else current
        runs.extend([current] * run)
        current = b if current == a else a
        i += 1
    alphabet = Alphabet((str(a), str(b)) if a < b else (str(b), str(a)))
    return Word(alphabet, tuple(alphabet.index(str(x)) for x in runs[:length]))


def champernowne_binary(length: int) -> Word:
    """Concatenation of the binary expansions of 1, 2, 3, ..."""
    parts: List[str] = []
    total = 0
    for k in count(1):
        if total >= length:
            break
        digits = format(k, "b")
        parts.append(digits)
        total += len(digits)
    return Word.from_text("".join(parts)[:length], Alphabet.binary())


def de_bruijn_sequence(k: int, r: int = 2) -> Word:
    """
    Linear de Bruijn word of order k over r symbols.

    Concatenates the Lyndon words whose length divides k (in lexicographic
    order) and appends the first k - 1 symbols, so every k-block occurs
    exactly once in a word of length r^k + k - 1.
    """
    if k < 1 or r < 1:
        raise InvalidInputError(f"need k >= 1 and r >= 1, got k={k}, r={r}")
    if r > 10:
        raise InvalidInputError("de Bruijn words use the digit alphabet 0..9")
    cyclic: List[int] = []
    a = [0] * (k + 1)

    def extend(t: int, p: int) -> None:
        if t > k:
            if k % p == 0:
                cyclic.extend(a[1:p + 1])
            return
        a[t] = a[t - p]
        extend(t + 1, p)
        for j in range(a[t - p] + 1, r):
            a[t] = j
            extend(t + 1, t)

    extend(1, 1)
    alphabet = Alphabet(tuple(str(i) for i in range(r)))
    data = tuple(cyclic + cyclic[:k - 1])
    return Word(alphabet, data)


def periodic(block: str, length: int) -> Word:
    if not block:
        raise InvalidInputError("periodic block must be nonempty")
    text = (block * (length // len(block) + 1))[:length]
    return Word.from_text(text, Word.from_text(block).alphabet)


NAMED_SEQUENCES = (
    "fibonacci",
    "golden",
    "morse",
    "chacon",
    "kolakoski",
    "champernowne_binary",
    "periodic",
    "de_bruijn",
)


def named_sequence(name: str, length: int, block: Optional[str] = None, order: int = 4) -> Word:
    """
    Prefix of a named sequence.

    fibonacci (alias golden) | morse | chacon | kolakoski | champernowne_binary |
    periodic (needs ``block``) | de_bruijn (of ``order``; truncated or, if
    shorter than ``length``, an error)
    """
    if length < 1:
        raise InvalidInputError(f"length must be >= 1, got {length}")
    logger.debug(f"Generating {name} prefix of length {length}")
    if name in ("fibonacci", "golden"):
        return fixed_point(FIBONACCI, "0", length)
    if name == "morse":
        return fixed_point(MORSE, "0", length)
    if name == "chacon":
        return fixed_point(CHACON, "0", length)
    if name == "kolakoski":
        return kolakoski(length)
    if name == "champernowne_binary":
        return champernowne_binary(length)
    if name == "periodic":
        if not block:
            raise InvalidInputError("periodic sequence needs a block")
        return periodic(block, length)
    if name == "de_bruijn":
        word = de_bruijn_sequence(order)
        if len(word) < length:
            raise InvalidInputError(
                f"de Bruijn word of order {order} has only {len(word)} symbols"
            )
        return word[:length]
    raise InvalidInputError(f"unknown sequence name {name!r}; expected one of {', '.join(NAMED_SEQUENCES)}")


def sequence_extender(name: str, block: Optional[str] = None):
    """Callable length -> Word for named sequences, used to auto-extend prefixes."""
    if name == "de_bruijn":
        return None

    def extend(length: int) -> Word:
        return named_sequence(name, length, block=block)

    return extend


def generate(spec: GeneratorSpec) -> Word:
    """Build the word a GeneratorSpec describes."""
    if spec.kind == "substitution":
        return fixed_point(Substitution.from_mapping(spec.images), spec.seed, spec.length)
    if spec.kind == "mechanical":
        alpha = spec.cf if spec.cf is not None else spec.alpha
        return mechanical(alpha, beta=Fraction(spec.beta), length=spec.length, variant=spec.variant)
    if spec.kind == "characteristic":
        if spec.cf is not None:
            return characteristic_word(spec.cf, spec.length)
        return characteristic_word_for(spec.alpha, spec.length)
    return named_sequence(spec.name, spec.length, block=spec.block, order=spec.order)
