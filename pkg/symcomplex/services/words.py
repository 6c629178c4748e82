"""
Finite words over finite alphabets.

This module is the substrate for every measure in the workbench:
- Alphabet / Word / FactorSet value types (immutable)
- Factor extraction and the complexity function p(n)
- Palindrome primitives (reversal, palindromic factors, richness)
- Balance and empirical block frequencies
- The sequence text format (one sequence per line, optional ``#alphabet:`` header)

CONVENTIONS:
- Symbols are stored as indices into the alphabet; labels only matter for I/O.
- Factor enumeration order is first occurrence in the word.
- The empty word counts as a palindrome unless ``include_empty=False``.
"""
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from loguru import logger

from symcomplex.exceptions import InvalidInputError, UnsupportedAlphabetError

WINDOW_EXCEEDS_WORD = "window exceeds word"
ALPHABET_HEADER = "#alphabet:"


@dataclass(frozen=True)
class Alphabet:
    """
    Ordered finite alphabet.

    Labels are printable strings. Text I/O requires single-character labels;
    recoded SFT alphabets use block labels such as "01".
    """

    symbols: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise InvalidInputError("alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise InvalidInputError(f"alphabet labels must be distinct: {symbols}")
        for label in symbols:
            if not isinstance(label, str) or not label or not label.isprintable():
                raise InvalidInputError(f"alphabet label must be a printable string: {label!r}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(symbols)})

    @classmethod
    def of(cls, labels: Union[str, Iterable[str]]) -> "Alphabet":
        """Build from a string of single-character labels or an iterable of labels."""
        return cls(tuple(labels))

    @classmethod
    def binary(cls) -> "Alphabet":
        return cls(("0", "1"))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidInputError(f"symbol {label!r} not in alphabet {''.join(self.symbols)!r}")

    def label(self, index: int) -> str:
        return self.symbols[index]

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __str__(self) -> str:
        return "".join(self.symbols) if all(len(s) == 1 for s in self.symbols) else ",".join(self.symbols)


@dataclass(frozen=True)
class Word:
    """
    Finite word: a tuple of symbol indices tied to an alphabet.

    The empty word is allowed. Slicing returns a Word over the same alphabet.
    """

    alphabet: Alphabet
    data: Tuple[int, ...] = ()

    def __post_init__(self):
        data = tuple(self.data)
        size = self.alphabet.size
        for symbol in data:
            if not isinstance(symbol, int) or not 0 <= symbol < size:
                raise InvalidInputError(f"symbol index {symbol!r} outside alphabet of size {size}")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_text(cls, text: str, alphabet: Optional[Alphabet] = None) -> "Word":
        """
        Parse a word written with single-character labels.

        Without an explicit alphabet the labels seen are sorted; text made of
        0s and 1s only is read over the binary alphabet so that constant words
        still count as binary.
        """
        text = text.strip()
        if alphabet is None:
            seen = set(text)
            alphabet = Alphabet.binary() if seen <= {"0", "1"} else Alphabet(tuple(sorted(seen)))
        return cls(alphabet, tuple(alphabet.index(ch) for ch in text))

    @classmethod
    def empty(cls, alphabet: Optional[Alphabet] = None) -> "Word":
        return cls(alphabet or Alphabet.binary(), ())

    def __len__(self) -> int:
        return len(self.data)

    def __iter__(self) -> Iterator[int]:
        return iter(self.data)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.alphabet, self.data[item])
        return self.data[item]

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise InvalidInputError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.data + other.data)

    def __str__(self) -> str:
        return "".join(self.alphabet.label(i) for i in self.data)

    def __repr__(self) -> str:
        text = str(self)
        if len(text) > 40:
            text = text[:37] + "..."
        return f"Word({text!r}, len={len(self)})"

    def labels(self) -> List[str]:
        return [self.alphabet.label(i) for i in self.data]

    def is_binary(self) -> bool:
        return self.alphabet.size == 2


@dataclass(frozen=True)
class FactorSet:
    """Distinct length-n factors of a word, in first-occurrence order."""

    n: int
    factors: Tuple[Word, ...]
    flag: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for factor in self.factors:
            if len(factor) != self.n:
                raise InvalidInputError(f"factor {factor!r} does not have length {self.n}")

    @property
    def count(self) -> int:
        return len(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.factors)

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.factors)

    def __contains__(self, word: object) -> bool:
        return word in self.members

    def as_strings(self) -> List[str]:
        return [str(f) for f in self.factors]


# ---------------------------------------------------------------------------
# Factors and the complexity function
# ---------------------------------------------------------------------------

def factor_keys(w: Word, n: int) -> List[Tuple[int, ...]]:
    """Distinct length-n windows of ``w`` as index tuples, first-occurrence order."""
    if n < 0:
        raise InvalidInputError(f"factor length must be non-negative, got {n}")
    data = w.data
    if n > len(data):
        return []
    return list(dict.fromkeys(data[i:i + n] for i in range(len(data) - n + 1)))


def factors(w: Word, n: int) -> FactorSet:
    """
    All distinct length-n contiguous subwords of ``w``.

    When n exceeds |w| the result is empty and flagged "window exceeds word".
    """
    if n > len(w):
        return FactorSet(n=n, factors=(), flag=WINDOW_EXCEEDS_WORD)
    keys = factor_keys(w, n)
    return FactorSet(n=n, factors=tuple(Word(w.alphabet, key) for key in keys))


def complexity_profile(w: Word, n_max: int) -> List[int]:
    """p(1), ..., p(n_max); p(0) = 1 is implied."""
    if n_max > len(w):
        raise InvalidInputError(f"n_max={n_max} exceeds word length {len(w)}")
    return [len(factor_keys(w, n)) for n in range(1, n_max + 1)]


def factor_language(w: Word, n_max: int) -> set:
    """All factors of length 1..n_max as index tuples."""
    keys = set()
    for n in range(1, min(n_max, len(w)) + 1):
        keys.update(factor_keys(w, n))
    return keys


def right_special_factors(w: Word, n: int) -> List[Word]:
    """Length-n factors with at least two distinct right extensions inside ``w``."""
    extensions: Dict[Tuple[int, ...], set] = {}
    for key in factor_keys(w, n + 1):
        extensions.setdefault(key[:-1], set()).add(key[-1])
    return [Word(w.alphabet, key) for key, ext in extensions.items() if len(ext) >= 2]


def left_special_factors(w: Word, n: int) -> List[Word]:
    """Length-n factors with at least two distinct left extensions inside ``w``."""
    extensions: Dict[Tuple[int, ...], set] = {}
    for key in factor_keys(w, n + 1):
        extensions.setdefault(key[1:], set()).add(key[0])
    return [Word(w.alphabet, key) for key, ext in extensions.items() if len(ext) >= 2]


# ---------------------------------------------------------------------------
# Palindromes
# ---------------------------------------------------------------------------

def reversal(w: Word) -> Word:
    return Word(w.alphabet, w.data[::-1])


def is_palindrome(w: Word) -> bool:
    return w.data == w.data[::-1]


def is_closed_under_reversal(w: Word, n_max: int) -> bool:
    """Every factor of length <= n_max has its reversal among the factors."""
    for n in range(1, min(n_max, len(w)) + 1):
        keys = set(factor_keys(w, n))
        if any(key[::-1] not in keys for key in keys):
            return False
    return True


class _PalindromicTree:
    """
    Palindromic tree (eertree) of a word.

    Node 0 is the imaginary root of length -1, node 1 the empty palindrome.
    ``new_at[i]`` is True when the longest palindromic suffix of data[:i+1]
    occurs for the first time at position i; ``suffix_lengths[i]`` is its length.
    """

    def __init__(self, data: Sequence[int]):
        self.lengths = [-1, 0]
        self.links = [0, 0]
        self.edges: List[Dict[int, int]] = [{}, {}]
        self.ends = [-1, -1]
        self.new_at: List[bool] = []
        self.suffix_lengths: List[int] = []
        last = 1
        for i, c in enumerate(data):
            cur = self._extendable(data, i, c, last)
            if c in self.edges[cur]:
                last = self.edges[cur][c]
                self.new_at.append(False)
                self.suffix_lengths.append(self.lengths[last])
                continue
            node = len(self.lengths)
            self.lengths.append(self.lengths[cur] + 2)
            self.ends.append(i)
            self.edges.append({})
            if self.lengths[node] == 1:
                self.links.append(1)
            else:
                link = self._extendable(data, i, c, self.links[cur])
                self.links.append(self.edges[link][c])
            self.edges[cur][c] = node
            last = node
            self.new_at.append(True)
            self.suffix_lengths.append(self.lengths[node])

    def _extendable(self, data: Sequence[int], i: int, c: int, node: int) -> int:
        while True:
            length = self.lengths[node]
            j = i - 1 - length
            if j >= 0 and data[j] == c or length == -1:
                return node
            node = self.links[node]

    def palindromes(self, data: Sequence[int]) -> List[Tuple[int, ...]]:
        """Non-empty distinct palindromes in order of first occurrence (by end position)."""
        return [
            tuple(data[end - length + 1:end + 1])
            for length, end in zip(self.lengths[2:], self.ends[2:])
        ]


def palindromic_factors(w: Word, include_empty: bool = True) -> List[Word]:
    """Distinct palindromic factors of all lengths, ε first when included."""
    tree = _PalindromicTree(w.data)
    result = [Word(w.alphabet, key) for key in tree.palindromes(w.data)]
    if include_empty:
        result.insert(0, Word(w.alphabet, ()))
    return result


def palindrome_count(w: Word, include_empty: bool = True) -> int:
    """Number of distinct palindromic factors; at most |w|+1 with ε, |w| without."""
    tree = _PalindromicTree(w.data)
    return len(tree.lengths) - 2 + (1 if include_empty else 0)


def palindrome_counts_by_length(w: Word, n_max: int) -> List[int]:
    """Pal(1..n_max): distinct palindromic factors of each length."""
    tree = _PalindromicTree(w.data)
    counts = [0] * (n_max + 1)
    for length in tree.lengths[2:]:
        if length <= n_max:
            counts[length] += 1
    return counts[1:]


def is_rich(w: Word, method: str = "count") -> bool:
    """
    Whether ``w`` has the maximal number |w|+1 of palindromic factors (ε included).

    method="count" compares the palindrome count with |w|+1; method="prefix"
    applies the prefix test: every prefix has a palindromic suffix occurring
    exactly once in that prefix. Both agree on every word.
    """
    if method == "count":
        return palindrome_count(w) == len(w) + 1
    if method == "prefix":
        return all(_has_unioccurrent_palindromic_suffix(w.data[:i]) for i in range(1, len(w) + 1))
    raise InvalidInputError(f"unknown richness test {method!r}")


def _has_unioccurrent_palindromic_suffix(prefix: Tuple[int, ...]) -> bool:
    n = len(prefix)
    for start in range(n):
        suffix = prefix[start:]
        if suffix != suffix[::-1]:
            continue
        length = n - start
        occurrences = sum(1 for j in range(n - length + 1) if prefix[j:j + length] == suffix)
        if occurrences == 1:
            return True
    return False


def longest_palindromic_suffix_lengths(w: Word) -> List[int]:
    """Entry i is the length of the longest palindromic suffix of w[:i+1]."""
    return _PalindromicTree(w.data).suffix_lengths


def rich_prefix_length(w: Word) -> int:
    """Length of the longest rich prefix of ``w`` (every prefix up to it is rich)."""
    tree = _PalindromicTree(w.data)
    for i, is_new in enumerate(tree.new_at):
        if not is_new:
            return i
    return len(w)


# ---------------------------------------------------------------------------
# Balance and frequencies
# ---------------------------------------------------------------------------

def require_binary(w: Word, operation: str) -> None:
    if not w.is_binary():
        raise UnsupportedAlphabetError(
            f"{operation} requires a binary alphabet, got {w.alphabet.size} symbols"
        )


def balance_defect(w: Word, n_max: int) -> Optional[int]:
    """Least n <= n_max at which counts of symbol 1 over n-factors differ by more than 1."""
    require_binary(w, "balance test")
    sums = [0] + list(accumulate(w.data))
    for n in range(1, min(n_max, len(w)) + 1):
        counts = [sums[i + n] - sums[i] for i in range(len(w) - n + 1)]
        if max(counts) - min(counts) > 1:
            return n
    return None


def is_balanced(w: Word, n_max: int) -> bool:
    return balance_defect(w, n_max) is None


def block_frequencies(w: Word, k: int) -> Dict[Word, float]:
    """Empirical frequency of each k-block over the |w|-k+1 windows."""
    if k < 1 or len(w) < k:
        raise InvalidInputError(f"need 1 <= k <= |w|, got k={k}, |w|={len(w)}")
    windows = len(w) - k + 1
    counts = Counter(w.data[i:i + k] for i in range(windows))
    ordered = dict.fromkeys(w.data[i:i + k] for i in range(windows))
    return {Word(w.alphabet, key): counts[key] / windows for key in ordered}


def symbol_frequency(w: Word, label: str) -> float:
    if not len(w):
        raise InvalidInputError("frequency of a symbol in the empty word is undefined")
    index = w.alphabet.index(label)
    return w.data.count(index) / len(w)


def run_lengths(w: Word) -> List[int]:
    """Lengths of maximal runs of equal symbols."""
    runs: List[int] = []
    previous = None
    for symbol in w.data:
        if symbol == previous:
            runs[-1] += 1
        else:
            runs.append(1)
            previous = symbol
    return runs


# ---------------------------------------------------------------------------
# Sequence file format
# ---------------------------------------------------------------------------

def parse_sequences(text: str) -> List[Word]:
    """
    Parse the sequence text format.

    One sequence per line, symbols as single characters, an optional first
    line ``#alphabet:abc`` fixing the alphabet. Blank lines are ignored.
    """
    alphabet: Optional[Alphabet] = None
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if lines and lines[0].startswith(ALPHABET_HEADER):
        alphabet = Alphabet.of(lines[0][len(ALPHABET_HEADER):].strip())
        lines = lines[1:]
    if alphabet is None:
        seen = set("".join(lines))
        alphabet = Alphabet.binary() if seen <= {"0", "1"} else Alphabet(tuple(sorted(seen)))
    words = [Word.from_text(line, alphabet) for line in lines if not line.startswith("#")]
    logger.debug(f"Parsed {len(words)} sequences over alphabet {alphabet}")
    return words


def read_sequences(path: Union[str, Path]) -> List[Word]:
    return parse_sequences(Path(path).read_text(encoding="utf-8"))


def format_sequences(words: Sequence[Word], header: bool = True) -> str:
    """Render words in the sequence text format."""
    if not words:
        return ""
    alphabet = words[0].alphabet
    if any(len(label) != 1 for label in alphabet.symbols):
        raise InvalidInputError("text format requires single-character alphabet labels")
    lines = [f"{ALPHABET_HEADER}{''.join(alphabet.symbols)}"] if header else []
    lines.extend(str(w) for w in words)
    return "\n".join(lines) + "\n"


def write_sequences(words: Sequence[Word], path: Union[str, Path], header: bool = True) -> None:
    Path(path).write_text(format_sequences(words, header=header), encoding="utf-8")
