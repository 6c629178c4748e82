"""
Complexity measures on words and sequence prefixes.

Covers the factor-based measures (eventual periodicity, palindrome
complexity and its inequalities, palindromic closure), the Morse closed form,
nonrepetitive complexity, window / arithmetic / maximal pattern complexity
and inconstancy.

Measures that describe an infinite sequence are computed on a finite prefix.
When a generator is available (``extend``: length -> Word) the prefix is
doubled until the reported values stop changing.
"""
from dataclasses import dataclass, field
from itertools import product
from math import log, sqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.spatial import ConvexHull, QhullError

from symcomplex.exceptions import InvalidInputError, PartialResultError
from symcomplex.schemas.reports import ComplexityReport
from symcomplex.services.words import (
    Alphabet,
    Word,
    require_binary,
    block_frequencies,
    complexity_profile,
    factor_keys,
    is_closed_under_reversal,
    is_rich,
    longest_palindromic_suffix_lengths,
    palindrome_counts_by_length,
    right_special_factors,
)

Extender = Callable[[int], Word]

EVENTUALLY_PERIODIC = "eventually-periodic"
APERIODIC_SO_FAR = "aperiodic-so-far"

# Inconstancy of a uniformly random binary sequence with h = 1
RANDOM_INCONSTANCY = (1 + sqrt(2)) / 2

# Longest prefix the adaptive doubling will request from a generator
MAX_ADAPTIVE_LENGTH = 1 << 20

MEASURES = ("p", "pal", "pn", "window", "arith", "maxpat_lb")


# ---------------------------------------------------------------------------
# Periodicity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicityVerdict:
    verdict: str
    witness: Optional[int]
    n_checked: int

    @property
    def eventually_periodic(self) -> bool:
        return self.verdict == EVENTUALLY_PERIODIC


def eventual_periodicity_test(w: Word, n_max: Optional[int] = None) -> PeriodicityVerdict:
    """
    Least n with p(n) <= n.

    A finite word of length L always has p(n) <= L - n + 1, so the search
    stops at ``n_max`` (default max(1, L // 10)) where the prefix still
    shows every factor of a recurrent sequence.
    """
    if len(w) < 2:
        raise InvalidInputError(f"periodicity test needs |w| >= 2, got {len(w)}")
    if n_max is None:
        n_max = max(1, len(w) // 10)
    n_max = min(n_max, len(w))
    for n in range(1, n_max + 1):
        if len(factor_keys(w, n)) <= n:
            return PeriodicityVerdict(EVENTUALLY_PERIODIC, n, n)
    return PeriodicityVerdict(APERIODIC_SO_FAR, None, n_max)


# ---------------------------------------------------------------------------
# Palindromes
# ---------------------------------------------------------------------------

def palindrome_complexity(w: Word, n_max: int) -> List[int]:
    """Pal(1..n_max)."""
    if n_max > len(w):
        raise InvalidInputError(f"n_max={n_max} exceeds word length {len(w)}")
    return palindrome_counts_by_length(w, n_max)


@dataclass(frozen=True)
class InequalityCheck:
    """Outcome of a per-n inequality over a range of n."""

    applicable: bool
    holds: Optional[bool]
    first_violation: Optional[int] = None
    lhs: Tuple[float, ...] = ()
    rhs: Tuple[float, ...] = ()
    reason: str = ""


def palindrome_inequality_check(w: Word, n_max: int) -> InequalityCheck:
    """
    Pal(n) + Pal(n+1) <= p(n+1) - p(n) + 2 for 1 <= n < n_max.

    Only applicable when the factors of ``w`` up to length n_max are closed
    under reversal; otherwise the verdict is "inapplicable".
    """
    if n_max > len(w):
        raise InvalidInputError(f"n_max={n_max} exceeds word length {len(w)}")
    if not is_closed_under_reversal(w, n_max):
        return InequalityCheck(applicable=False, holds=None, reason="language not closed under reversal")
    pal = palindrome_counts_by_length(w, n_max)
    p = complexity_profile(w, n_max)
    lhs = tuple(pal[n - 1] + pal[n] for n in range(1, n_max))
    rhs = tuple(p[n] - p[n - 1] + 2 for n in range(1, n_max))
    violation = next((n for n, (a, b) in enumerate(zip(lhs, rhs), start=1) if a > b), None)
    return InequalityCheck(True, violation is None, violation, lhs, rhs)


def palindrome_upper_bound_check(w: Word, n_max: int) -> InequalityCheck:
    """Pal(n) < (16/n) p(n + floor(n/4)) for aperiodic sequences."""
    n_max = min(n_max, max(1, (4 * len(w)) // 5))
    pal = palindrome_counts_by_length(w, n_max)
    lhs, rhs = [], []
    violation = None
    for n in range(1, n_max + 1):
        bound = 16 / n * len(factor_keys(w, n + n // 4))
        lhs.append(pal[n - 1])
        rhs.append(bound)
        if violation is None and pal[n - 1] >= bound:
            violation = n
    return InequalityCheck(True, violation is None, violation, tuple(lhs), tuple(rhs))


def palindromic_closure(w: Word) -> Word:
    """Shortest palindrome with prefix ``w``."""
    if not len(w):
        return w
    suffix = longest_palindromic_suffix_lengths(w)[-1]
    head = w.data[:len(w) - suffix]
    return Word(w.alphabet, w.data + head[::-1])


def is_standard_episturmian_prefix(w: Word) -> bool:
    """
    Every prefix's palindromic closure is compatible with ``w``.

    Closures longer than ``w`` are compared on the overlap only.
    """
    data = w.data
    suffixes = longest_palindromic_suffix_lengths(w)
    for i in range(1, len(data) + 1):
        head = data[:i - suffixes[i - 1]]
        tail = head[::-1][:len(data) - i]
        if data[i:i + len(tail)] != tail:
            return False
    return True


def episturmian_language_test(w: Word, n_max: int) -> bool:
    """Closed under reversal with at most one right special factor per length."""
    if not is_closed_under_reversal(w, n_max):
        return False
    return all(len(right_special_factors(w, n)) <= 1 for n in range(1, min(n_max, len(w) - 1) + 1))


def count_rich_words(n: int, r: int, method: str = "count") -> int:
    """Number of rich words of length n over r letters (exhaustive)."""
    if n < 0 or r < 1:
        raise InvalidInputError(f"need n >= 0 and r >= 1, got n={n}, r={r}")
    alphabet = Alphabet(tuple(str(i) for i in range(r)))
    return sum(1 for data in product(range(r), repeat=n) if is_rich(Word(alphabet, data), method=method))


# ---------------------------------------------------------------------------
# Morse
# ---------------------------------------------------------------------------

def morse_complexity_closed_form(n: int) -> int:
    """
    p(n) of the Morse sequence.

    p(1)=2, p(2)=4; for n = 2^r + q + 1 with 0 < q <= 2^r it is
    6*2^(r-1) + 4q when q <= 2^(r-1) and 8*2^(r-1) + 2q otherwise.
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if n == 1:
        return 2
    if n == 2:
        return 4
    r = (n - 2).bit_length() - 1
    q = n - 1 - (1 << r)
    # r = 0 only for n = 3, where 2^(r-1) = 1/2
    if r == 0:
        return 6
    half = 1 << (r - 1)
    return 6 * half + 4 * q if q <= half else 8 * half + 2 * q


# ---------------------------------------------------------------------------
# Nonrepetitive complexity
# ---------------------------------------------------------------------------

def _first_repeat(data: Sequence[int], n: int) -> Optional[int]:
    seen = set()
    for i in range(len(data) - n + 1):
        window = tuple(data[i:i + n])
        if window in seen:
            return i
        seen.add(window)
    return None


def nonrepetitive_complexity(w: Word, n: int, extend: Optional[Extender] = None) -> int:
    """
    P^N(n): largest m such that the first m windows of length n are pairwise distinct.

    Raises:
        PartialResultError: no repeat inside ``w`` and no generator to extend it;
            ``partial`` holds the lower bound seen so far
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    word = w
    while True:
        m = _first_repeat(word.data, n)
        if m is not None:
            return m
        if extend is None or len(word) >= MAX_ADAPTIVE_LENGTH:
            raise PartialResultError(
                f"prefix of length {len(word)} too short for P^N({n})",
                partial=max(len(word) - n + 1, 0),
                n=n,
            )
        word = extend(max(2 * len(word), 2 * n))
        logger.debug(f"Extended prefix to {len(word)} for P^N({n})")


@dataclass(frozen=True)
class EulerianEstimate:
    """log P^N(n)/n per n and their maximum; a finite-n estimate, not a limit."""

    values: Dict[int, float]
    estimate: float


def eulerian_entropy_estimate(
    w: Word, n_values: Sequence[int], extend: Optional[Extender] = None
) -> EulerianEstimate:
    values = {n: log(nonrepetitive_complexity(w, n, extend)) / n for n in n_values}
    return EulerianEstimate(values, max(values.values()) if values else 0.0)


# ---------------------------------------------------------------------------
# Window, arithmetic and maximal pattern complexity
# ---------------------------------------------------------------------------

def window_complexity(w: Word, n: int) -> int:
    """Distinct aligned blocks w[kn:(k+1)n]."""
    if n < 1 or n > len(w):
        raise InvalidInputError(f"need 1 <= n <= |w|, got n={n}, |w|={len(w)}")
    data = w.data
    return len({data[k * n:(k + 1) * n] for k in range(len(data) // n)})


def arithmetic_complexity(w: Word, n: int, k_max: int) -> int:
    """Distinct words w_i w_{i+k} ... w_{i+(n-1)k} over all i and 1 <= k <= k_max."""
    if n < 1 or k_max < 1:
        raise InvalidInputError(f"need n >= 1 and k_max >= 1, got n={n}, k_max={k_max}")
    data = w.data
    seen = set()
    for k in range(1, k_max + 1):
        span = (n - 1) * k
        for i in range(len(data) - span):
            seen.add(data[i:i + span + 1:k])
    return len(seen)


@dataclass(frozen=True)
class PatternSearchResult:
    """
    Certified lower bound for the maximal pattern complexity P*(k).

    ``value`` is the largest |F_tau| over patterns 0 = tau_0 < ... < tau_{k-1} <= window,
    ``pattern`` one pattern attaining it.
    """

    k: int
    window: int
    value: int
    pattern: Tuple[int, ...]
    patterns_tested: int
    positions: int


def maximal_pattern_complexity_lb(
    w: Word, k: int, window: int, positions: Optional[int] = None
) -> PatternSearchResult:
    """
    Exact sup of |F_tau(w)| over the bounded pattern family.

    Patterns are explored depth-first. Each node keeps the class of every
    start position (the partial word it reads); the counts of all children of
    a node are obtained at once from class-by-symbol occupancy.
    """
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if window < k - 1:
        raise InvalidInputError(f"window {window} cannot hold a pattern of {k} points")
    available = len(w) - window
    if available < 1:
        raise InvalidInputError(f"word of length {len(w)} is shorter than the window {window}")
    positions = available if positions is None else min(positions, available)
    r = w.alphabet.size
    data = np.asarray(w.data, dtype=np.int64)
    columns = np.lib.stride_tricks.sliding_window_view(data, window + 1)[:positions]
    indicators = [(columns == a).astype(np.float64) for a in range(r)]

    best = [0, (0,)]
    tested = [0]

    def compact(ids: np.ndarray) -> Tuple[np.ndarray, int]:
        uniques, inverse = np.unique(ids, return_inverse=True)
        return inverse.astype(np.int64), len(uniques)

    def visit(ids: np.ndarray, classes: int, pattern: Tuple[int, ...]) -> None:
        depth = len(pattern)
        if depth == k:
            tested[0] += 1
            if classes > best[0]:
                best[0], best[1] = classes, pattern
            return
        last = pattern[-1]
        children = np.arange(last + 1, window - (k - depth - 1) + 1)
        if depth == k - 1:
            onehot = np.zeros((classes, positions))
            onehot[ids, np.arange(positions)] = 1.0
            counts = sum((onehot @ ind[:, children] > 0).sum(axis=0) for ind in indicators)
            tested[0] += len(children)
            top = int(np.argmax(counts))
            if counts[top] > best[0]:
                best[0], best[1] = int(counts[top]), pattern + (int(children[top]),)
            return
        for t in children:
            child, child_classes = compact(ids * r + columns[:, t])
            visit(child, child_classes, pattern + (int(t),))

    root, root_classes = compact(columns[:, 0].copy())
    visit(root, root_classes, (0,))
    logger.debug(f"Pattern search k={k} window={window}: {tested[0]} patterns, best {best[0]}")
    return PatternSearchResult(k, window, best[0], best[1], tested[0], positions)


# ---------------------------------------------------------------------------
# Inconstancy
# ---------------------------------------------------------------------------

def inconstancy(w: Word, h: float = 1.0) -> float:
    """
    I = 1 + (sqrt(h^2 + 1) - 1)(mu[0h] + mu[h0]) with symbol 1 read as height h.
    """
    require_binary(w, "inconstancy")
    if h <= 0:
        raise InvalidInputError(f"h must be positive, got {h}")
    if len(w) < 2:
        raise InvalidInputError("inconstancy needs at least two symbols")
    freqs = {key.data: value for key, value in block_frequencies(w, 2).items()}
    changes = freqs.get((0, 1), 0.0) + freqs.get((1, 0), 0.0)
    return 1.0 + (sqrt(h * h + 1.0) - 1.0) * changes


def inconstancy_geometric(w: Word, h: float = 1.0) -> float:
    """Twice the polyline length over the perimeter of its convex hull."""
    require_binary(w, "inconstancy")
    if len(w) < 2:
        raise InvalidInputError("inconstancy needs at least two symbols")
    heights = h * np.asarray(w.data, dtype=np.float64)
    points = np.column_stack([np.arange(len(w), dtype=np.float64), heights])
    length = float(np.hypot(np.diff(points[:, 0]), np.diff(heights)).sum())
    try:
        perimeter = ConvexHull(points).area
    except QhullError:
        # flat polyline: the hull degenerates to the segment itself
        perimeter = 2 * length
    return 2 * length / perimeter


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class StablePrefix:
    word: Word
    stable: bool
    lengths_tried: List[int] = field(default_factory=list)


def stable_prefix(
    w: Optional[Word], n_max: int, extend: Optional[Extender] = None
) -> StablePrefix:
    """
    Adaptive doubling: accept a prefix when p(1..n_max) agrees with the prefix of half its length.
    """
    if extend is None:
        if w is None:
            raise InvalidInputError("need a word or a generator")
        half = w[:len(w) // 2]
        stable = len(half) >= n_max and complexity_profile(half, n_max) == complexity_profile(w, n_max)
        return StablePrefix(w, stable, [len(half), len(w)])
    length = max(4 * n_max, 64)
    tried = []
    previous = None
    while length <= MAX_ADAPTIVE_LENGTH:
        word = extend(length)
        tried.append(length)
        profile = complexity_profile(word, n_max)
        if previous is not None and profile == previous:
            return StablePrefix(word, True, tried)
        previous = profile
        length *= 2
    logger.warning(f"Complexity profile did not stabilise up to length {tried[-1]}")
    return StablePrefix(word, False, tried)


def complexity_report(
    w: Optional[Word],
    measures: Sequence[str],
    n_max: int,
    extend: Optional[Extender] = None,
    k_max: int = 3,
    window: int = 16,
) -> List[ComplexityReport]:
    """One ComplexityReport per requested measure for n = 1..n_max."""
    unknown = [m for m in measures if m not in MEASURES]
    if unknown:
        raise InvalidInputError(f"unknown measures {unknown}; expected some of {', '.join(MEASURES)}")
    prefix = stable_prefix(w, n_max, extend)
    word = prefix.word
    if n_max > len(word):
        raise InvalidInputError(f"n_max={n_max} exceeds word length {len(word)}")
    if not prefix.stable:
        logger.warning(f"Prefix of length {len(word)} flagged unstable")
    n_values = list(range(1, n_max + 1))
    meta = {"prefix_length": len(word), "stable": prefix.stable}
    reports = []
    for measure in measures:
        extra: Dict[str, object] = {}
        if measure == "p":
            values = complexity_profile(word, n_max)
        elif measure == "pal":
            values = palindrome_complexity(word, n_max)
        elif measure == "pn":
            values = []
            for n in n_values:
                try:
                    values.append(nonrepetitive_complexity(word, n, extend))
                except PartialResultError as e:
                    values.append(None)
                    extra.setdefault("partial", {})[n] = e.partial
        elif measure == "window":
            values = [window_complexity(word, n) for n in n_values]
        elif measure == "arith":
            values = [arithmetic_complexity(word, n, k_max) for n in n_values]
            extra["k_max"] = k_max
        else:
            values = [
                maximal_pattern_complexity_lb(word, n, max(window, n - 1)).value for n in n_values
            ]
            extra["window"] = window
        reports.append(ComplexityReport(measure=measure, n_values=n_values, values=values, metadata={**meta, **extra}))
    return reports
