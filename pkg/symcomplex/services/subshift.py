"""
Shifts of finite type.

An Sft is a memory-1 vertex shift: a 0/1 adjacency matrix over states, plus
an emission map state -> original symbol. Memory-1 inputs use the identity
emission. Forbidden-word inputs of length m are recoded onto (m-1)-blocks and
each block emits its first symbol, so a path of states reads off a point of
the original shift.

Pattern counts N(S) are counted on the original symbols.
"""
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import log
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from loguru import logger
from pydantic import ValidationError

from symcomplex.config import settings
from symcomplex.exceptions import (
    EmptySubshiftError,
    InvalidInputError,
    PreconditionError,
    ResourceBudgetError,
)
from symcomplex.schemas.sft import SftSpec
from symcomplex.services.words import Alphabet, FactorSet, Word

Matrix = Tuple[Tuple[int, ...], ...]

FAST = "fast"
ENUMERATE = "enumerate"
AUTOMATON = "automaton"
AUTO = "auto"


@dataclass(frozen=True)
class CoordinateSet:
    """Strictly increasing S within {0, ..., n-1}."""

    n: int
    members: Tuple[int, ...]

    def __post_init__(self):
        members = tuple(int(i) for i in self.members)
        if self.n < 0:
            raise InvalidInputError(f"horizon must be >= 0, got {self.n}")
        if any(b <= a for a, b in zip(members, members[1:])):
            raise InvalidInputError(f"coordinates must be strictly increasing: {members}")
        if members and (members[0] < 0 or members[-1] >= self.n):
            raise InvalidInputError(f"coordinates {members} fall outside 0..{self.n - 1}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, members: Iterable[int], n: Optional[int] = None) -> "CoordinateSet":
        members = tuple(sorted(set(int(i) for i in members)))
        if n is None:
            n = members[-1] + 1 if members else 0
        return cls(n, members)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "CoordinateSet":
        return cls(n, tuple(i for i in range(n) if mask >> i & 1))

    @property
    def size(self) -> int:
        return len(self.members)

    def complement(self) -> "CoordinateSet":
        inside = set(self.members)
        return CoordinateSet(self.n, tuple(i for i in range(self.n) if i not in inside))

    def intervals(self) -> List[Tuple[int, int]]:
        """Maximal runs of consecutive members as (start, length)."""
        runs: List[Tuple[int, int]] = []
        for i in self.members:
            if runs and runs[-1][0] + runs[-1][1] == i:
                runs[-1] = (runs[-1][0], runs[-1][1] + 1)
            else:
                runs.append((i, 1))
        return runs

    def clusters(self, gap: int) -> List[Tuple[int, ...]]:
        """Split members wherever consecutive members are >= gap apart."""
        groups: List[List[int]] = []
        for i in self.members:
            if groups and i - groups[-1][-1] < gap:
                groups[-1].append(i)
            else:
                groups.append([i])
        return [tuple(g) for g in groups]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class Sft:
    """
    Vertex shift over ``states`` with emission to ``symbols``.

    Attributes:
        symbols: Alphabet of the original shift
        states: Alphabet of states (block labels after recoding)
        adjacency: 0/1 matrix over states, no stranded states
        emission: state index -> symbol index
        block_length: length of the blocks the states stand for (1 = no recoding)
        name: label used in reports
    """

    symbols: Alphabet
    states: Alphabet
    adjacency: Matrix
    emission: Tuple[int, ...]
    block_length: int = 1
    name: str = ""

    def __post_init__(self):
        size = self.states.size
        matrix = tuple(tuple(int(v) for v in row) for row in self.adjacency)
        if len(matrix) != size or any(len(row) != size for row in matrix):
            raise InvalidInputError(f"adjacency must be {size}x{size}")
        if any(v not in (0, 1) for row in matrix for v in row):
            raise InvalidInputError("adjacency entries must be 0 or 1")
        if len(self.emission) != size or any(not 0 <= e < self.symbols.size for e in self.emission):
            raise InvalidInputError("emission must map every state to a symbol")
        if size == 0:
            raise EmptySubshiftError("empty subshift")
        object.__setattr__(self, "adjacency", matrix)
        object.__setattr__(self, "emission", tuple(self.emission))

    @property
    def size(self) -> int:
        return self.states.size

    @property
    def is_recoded(self) -> bool:
        return self.block_length > 1

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.adjacency, dtype=np.int64)

    @cached_property
    def successor_masks(self) -> Tuple[int, ...]:
        return tuple(
            sum(1 << j for j, v in enumerate(row) if v) for row in self.adjacency
        )

    @cached_property
    def emission_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.symbols.size
        for state, symbol in enumerate(self.emission):
            masks[symbol] |= 1 << state
        return tuple(masks)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def advance(self):
        """Cached map: bitmask of states -> bitmask of their successors."""
        successors = self.successor_masks

        @lru_cache(maxsize=None)
        def step(mask: int) -> int:
            result = 0
            state = 0
            while mask:
                if mask & 1:
                    result |= successors[state]
                mask >>= 1
                state += 1
            return result

        return step

    def state_word(self, state: int) -> Word:
        """The original block a state stands for."""
        return Word.from_text(self.states.label(state), self.symbols) if self.is_recoded else Word(
            self.symbols, (self.emission[state],)
        )

    def to_spec(self) -> SftSpec:
        return SftSpec(
            name=self.name or None,
            alphabet=list(self.states.symbols),
            matrix=[list(row) for row in self.adjacency],
        )


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _trim(adjacency: np.ndarray) -> np.ndarray:
    """Indices of states that survive repeated removal of sinks and sources."""
    keep = np.arange(adjacency.shape[0])
    matrix = adjacency
    while matrix.size:
        alive = (matrix.sum(axis=1) > 0) & (matrix.sum(axis=0) > 0)
        if alive.all():
            break
        keep = keep[alive]
        matrix = matrix[np.ix_(alive, alive)]
    return keep if matrix.size else np.arange(0)


def _build(
    symbols: Alphabet,
    state_labels: Sequence[str],
    adjacency: np.ndarray,
    emission: Sequence[int],
    block_length: int,
    name: str,
) -> Sft:
    keep = _trim(adjacency)
    if len(keep) == 0:
        raise EmptySubshiftError("empty subshift: no bi-infinite path survives", name=name)
    if len(keep) < adjacency.shape[0]:
        dropped = [state_labels[i] for i in range(adjacency.shape[0]) if i not in set(keep.tolist())]
        logger.debug(f"Trimmed stranded states {dropped} from {name or 'sft'}")
    trimmed = adjacency[np.ix_(keep, keep)]
    return Sft(
        symbols=symbols,
        states=Alphabet(tuple(state_labels[i] for i in keep)),
        adjacency=tuple(tuple(int(v) for v in row) for row in trimmed),
        emission=tuple(emission[i] for i in keep),
        block_length=block_length,
        name=name,
    )


def from_matrix(
    matrix: Sequence[Sequence[int]],
    alphabet: Optional[Union[Alphabet, Sequence[str]]] = None,
    name: str = "",
) -> Sft:
    """Memory-1 SFT from a 0/1 adjacency matrix; labels default to 0..r-1."""
    array = np.array(matrix, dtype=np.int64)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise InvalidInputError(f"adjacency matrix must be square, got shape {array.shape}")
    size = array.shape[0]
    if alphabet is None:
        alphabet = Alphabet(tuple(str(i) for i in range(size)))
    elif not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    if alphabet.size != size:
        raise InvalidInputError(f"alphabet has {alphabet.size} symbols for a {size}x{size} matrix")
    if ((array != 0) & (array != 1)).any():
        raise InvalidInputError("adjacency entries must be 0 or 1")
    return _build(alphabet, alphabet.symbols, array, list(range(size)), 1, name)


def from_edges(edges: Iterable[Tuple[int, int]], size: Optional[int] = None, name: str = "") -> Sft:
    edges = [(int(a), int(b)) for a, b in edges]
    if size is None:
        size = max(max(a, b) for a, b in edges) + 1 if edges else 0
    matrix = np.zeros((size, size), dtype=np.int64)
    for a, b in edges:
        if not (0 <= a < size and 0 <= b < size):
            raise InvalidInputError(f"edge {a}->{b} outside 0..{size - 1}")
        matrix[a, b] = 1
    return from_matrix(matrix, name=name)


def from_forbidden_words(
    alphabet: Union[Alphabet, Sequence[str]],
    forbidden: Iterable[Union[str, Word]],
    name: str = "",
) -> Sft:
    """
    SFT excluding a finite list of blocks.

    With longest forbidden block of length m the result is recoded onto the
    allowed (m-1)-blocks; with m <= 2 the states are the symbols themselves.

    Raises:
        InvalidInputError: empty forbidden word or unknown symbol
        EmptySubshiftError: no bi-infinite point avoids the forbidden blocks
    """
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    words = [w if isinstance(w, Word) else Word.from_text(w, alphabet) for w in forbidden]
    if any(len(w) == 0 for w in words):
        raise InvalidInputError("forbidden words must be nonempty")
    patterns = {w.data for w in words}
    m = max((len(w) for w in words), default=2)
    block_length = max(m - 1, 1)

    def allowed(data: Tuple[int, ...]) -> bool:
        return not any(
            data[i:i + len(p)] == p for p in patterns for i in range(len(data) - len(p) + 1)
        )

    blocks = [b for b in product(range(alphabet.size), repeat=block_length) if allowed(b)]
    index = {b: i for i, b in enumerate(blocks)}
    matrix = np.zeros((len(blocks), len(blocks)), dtype=np.int64)
    for b in blocks:
        for symbol in range(alphabet.size):
            extended = b + (symbol,)
            if allowed(extended) and extended[1:] in index:
                matrix[index[b], index[extended[1:]]] = 1
    if block_length == 1:
        labels = [alphabet.label(b[0]) for b in blocks]
    else:
        labels = ["".join(alphabet.label(s) for s in b) for b in blocks]
    if not blocks:
        raise EmptySubshiftError("empty subshift: every block is forbidden", name=name)
    return _build(alphabet, labels, matrix, [b[0] for b in blocks], block_length, name)


def full_shift(r: int) -> Sft:
    if r < 1:
        raise InvalidInputError(f"full shift needs r >= 1, got {r}")
    return from_matrix(np.ones((r, r), dtype=np.int64), name=f"full{r}")


GOLDEN_MATRIX = [[1, 1], [1, 0]]
PERIOD2_MATRIX = [[0, 1], [1, 0]]
FIG_I_EDGES = [(0, 0), (0, 1), (1, 2), (2, 1), (2, 0)]
FIG_II_EDGES = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0)]

NAMED_SFTS = ("golden", "full2", "full3", "period2", "figI", "figII")


def named(name: str) -> Sft:
    """Built-in SFTs; ``full<r>`` is accepted for any r >= 1."""
    if name == "golden":
        return from_matrix(GOLDEN_MATRIX, name="golden")
    if name == "period2":
        return from_matrix(PERIOD2_MATRIX, name="period2")
    if name == "figI":
        return from_edges(FIG_I_EDGES, size=3, name="figI")
    if name == "figII":
        return from_edges(FIG_II_EDGES, size=3, name="figII")
    if name.startswith("full") and name[4:].isdigit():
        return full_shift(int(name[4:]))
    raise InvalidInputError(f"unknown SFT {name!r}; expected one of {', '.join(NAMED_SFTS)}")


def from_spec(spec: SftSpec) -> Sft:
    name = spec.name or ""
    if spec.matrix is not None:
        return from_matrix(spec.matrix, spec.alphabet, name=name)
    if spec.edges is not None:
        edges = {(int(a), int(b)) for a, b in spec.edges}
        size = len(spec.alphabet) if spec.alphabet else max(max(e) for e in edges) + 1
        matrix = [[1 if (a, b) in edges else 0 for b in range(size)] for a in range(size)]
        return from_matrix(matrix, spec.alphabet or None, name=name)
    return from_forbidden_words(spec.alphabet, spec.forbidden, name=name)


def from_json(text: str) -> Sft:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"SFT JSON is not valid JSON: {e}")
    if isinstance(data, str):
        return named(data)
    try:
        spec = SftSpec.model_validate(data)
    except ValidationError as e:
        raise InvalidInputError(f"invalid SFT spec: {e.errors()[0]['msg']}")
    return from_spec(spec)


def load(reference: str) -> Sft:
    """Resolve a built-in name, a JSON file path or inline JSON."""
    reference = reference.strip()
    if reference.startswith("{"):
        return from_json(reference)
    path = Path(reference)
    if path.suffix == ".json" or path.is_file():
        if not path.is_file():
            raise InvalidInputError(f"SFT file not found: {reference}")
        return from_json(path.read_text(encoding="utf-8"))
    return named(reference)


# ---------------------------------------------------------------------------
# Blocks and entropy
# ---------------------------------------------------------------------------

def count_paths(x: Sft, length: int) -> int:
    """Number of state paths with ``length`` states (exact integer)."""
    if length <= 0:
        return 1
    vector = [1] * x.size
    for _ in range(length - 1):
        vector = [sum(v for v, edge in zip(vector, row) if edge) for row in x.adjacency]
    return sum(vector)


def count_blocks(x: Sft, n: int) -> int:
    """
    |L_n| by transfer-matrix counting with Python integers.

    Original n-blocks correspond one-to-one with state paths of
    n - block_length + 1 states once n >= block_length.
    """
    if n < 0:
        raise InvalidInputError(f"block length must be >= 0, got {n}")
    if n == 0:
        return 1
    if n >= x.block_length:
        return count_paths(x, n - x.block_length + 1)
    return len({x.state_word(s).data[:n] for s in range(x.size)})


def paths(x: Sft, length: int) -> Iterable[Tuple[int, ...]]:
    frontier: List[Tuple[int, ...]] = [(s,) for s in range(x.size)]
    for _ in range(length - 1):
        frontier = [p + (t,) for p in frontier for t in range(x.size) if x.adjacency[p[-1]][t]]
    return frontier


def enumerate_blocks(x: Sft, n: int) -> FactorSet:
    """All allowed n-blocks in lexicographic order."""
    if n < 0:
        raise InvalidInputError(f"block length must be >= 0, got {n}")
    if n == 0:
        return FactorSet(0, (Word.empty(x.symbols),))
    estimate = count_blocks(x, n) * n
    if estimate > settings.enumeration_budget:
        raise ResourceBudgetError(
            f"enumerating {n}-blocks needs ~{estimate} steps", budget=settings.enumeration_budget
        )
    blocks = set()
    if n >= x.block_length:
        for path in paths(x, n - x.block_length + 1):
            word = tuple(x.emission[s] for s in path) + x.state_word(path[-1]).data[1:]
            blocks.add(word)
    else:
        blocks = {x.state_word(s).data[:n] for s in range(x.size)}
    return FactorSet(n, tuple(Word(x.symbols, b) for b in sorted(blocks)))


def spectral_radius(x: Sft, tol: Optional[float] = None, max_iter: Optional[int] = None) -> float:
    """
    Perron root of the adjacency matrix by power iteration on M + I.

    The shift by I makes the dominant eigenvalue strictly dominant even for
    periodic matrices; the iteration stops at relative change ``tol``.
    """
    tol = settings.power_iteration_tol if tol is None else tol
    max_iter = settings.power_iteration_max_iter if max_iter is None else max_iter
    shifted = x.matrix.astype(float) + np.eye(x.size)
    vector = np.ones(x.size) / x.size
    estimate = 0.0
    for iteration in range(1, max_iter + 1):
        image = shifted @ vector
        norm = np.abs(image).sum()
        previous, estimate = estimate, norm / np.abs(vector).sum()
        vector = image / norm
        if iteration > 1 and abs(estimate - previous) <= tol * estimate:
            logger.debug(f"Power iteration converged after {iteration} steps")
            return estimate - 1.0
    logger.warning(f"Power iteration did not converge in {max_iter} steps; using eigvals")
    return float(np.max(np.abs(np.linalg.eigvals(x.matrix.astype(float)))))


def entropy(x: Sft) -> float:
    """Topological entropy in natural-log units."""
    radius = spectral_radius(x)
    if radius <= 1.0 + 1e-14:
        return 0.0
    return log(radius)


def block_count_entropy_estimates(x: Sft, n_max: int) -> List[float]:
    """log|L_n|/n for n = 1..n_max; decreases toward the entropy."""
    return [log(count_blocks(x, n)) / n for n in range(1, n_max + 1)]


def is_power_positive(x: Sft, k: int) -> bool:
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    return bool(np.linalg.matrix_power((x.matrix > 0).astype(np.int64), k).all())


@lru_cache(maxsize=256)
def primitive_exponent(x: Sft) -> Optional[int]:
    """Least k with M^k > 0, or None when M is not primitive (Wielandt bound)."""
    base = (x.matrix > 0).astype(np.int64)
    power = base.copy()
    bound = (x.size - 1) ** 2 + 1
    for k in range(1, bound + 1):
        if power.all():
            return k
        power = ((power @ base) > 0).astype(np.int64)
    return None


def is_mixing(x: Sft) -> bool:
    return primitive_exponent(x) is not None


# ---------------------------------------------------------------------------
# Pattern counts N(S)
# ---------------------------------------------------------------------------

def _coordinate_set(S: Union[CoordinateSet, Iterable[int]]) -> CoordinateSet:
    return S if isinstance(S, CoordinateSet) else CoordinateSet.of(S)


def _pattern_count_enumerate(x: Sft, offsets: Tuple[int, ...]) -> int:
    """Project allowed words on {0..max} onto ``offsets`` and deduplicate."""
    span = offsets[-1] + 1
    estimate = count_blocks(x, span) * span
    if estimate > settings.enumeration_budget:
        raise ResourceBudgetError(
            f"pattern enumeration over {span} coordinates needs ~{estimate} extensions",
            budget=settings.enumeration_budget,
        )
    members = set(offsets)
    frontier = {((x.emission[s],) if 0 in members else (), s) for s in range(x.size)}
    for t in range(1, span):
        keep = t in members
        frontier = {
            (pattern + (x.emission[nxt],) if keep else pattern, nxt)
            for pattern, state in frontier
            for nxt in range(x.size)
            if x.adjacency[state][nxt]
        }
    return len({pattern for pattern, _ in frontier})


def _pattern_count_automaton(x: Sft, offsets: Tuple[int, ...]) -> int:
    """
    Count patterns through reachable-state sets.

    Each distinct partial pattern carries the set of states it can be in;
    patterns are only ever told apart by their symbols, so it is enough to
    count how many patterns share each state set.
    """
    members = set(offsets)
    sets: Dict[int, int] = {x.full_mask: 1}
    for t in range(offsets[-1] + 1):
        if t:
            advanced: Dict[int, int] = {}
            for mask, count in sets.items():
                nxt = x.advance(mask)
                advanced[nxt] = advanced.get(nxt, 0) + count
            sets = advanced
        if t in members:
            split: Dict[int, int] = {}
            for mask, count in sets.items():
                for symbol_mask in x.emission_masks:
                    part = mask & symbol_mask
                    if part:
                        split[part] = split.get(part, 0) + count
            sets = split
    return sum(sets.values())


def pattern_count(
    x: Sft,
    S: Union[CoordinateSet, Iterable[int]],
    method: str = AUTO,
) -> int:
    """
    N(S): number of distinct restrictions to S of allowed words.

    Args:
        x: the SFT
        S: coordinate set (or any iterable of nonnegative coordinates)
        method: "fast" (cluster product, needs a primitive matrix), "enumerate"
            (project all allowed words), "automaton" (state-set counting) or
            "auto" (fast when available, enumerate otherwise)

    Returns:
        The exact count; N(empty set) = 1.

    Raises:
        PreconditionError: "fast" requested on a non-primitive SFT
        ResourceBudgetError: enumeration over the budget
    """
    S = _coordinate_set(S)
    if not S.members:
        return 1
    start = S.members[0]
    offsets = tuple(i - start for i in S.members)
    if method == AUTO:
        method = FAST if primitive_exponent(x) is not None else ENUMERATE
    if method == FAST:
        return _pattern_count_fast(x, offsets)
    if method == ENUMERATE:
        return _pattern_count_enumerate(x, offsets)
    if method == AUTOMATON:
        return _pattern_count_automaton(x, offsets)
    raise InvalidInputError(f"unknown pattern-count method {method!r}")


def _pattern_count_fast(x: Sft, offsets: Tuple[int, ...]) -> int:
    """
    Product over clusters.

    With M^k > 0, symbols at coordinates k or more apart are unconstrained by
    each other, so N(S) factors over the clusters of S split at gaps >= k.
    For k <= 2 the clusters are intervals and each factor is a block count.
    """
    k = primitive_exponent(x)
    if k is None:
        raise PreconditionError("cluster factorisation needs a primitive adjacency matrix", sft=x.name)
    total = 1
    for cluster in CoordinateSet(offsets[-1] + 1, offsets).clusters(k):
        shifted = tuple(i - cluster[0] for i in cluster)
        total *= _cluster_count(x, shifted)
    return total


@lru_cache(maxsize=65536)
def _cluster_count(x: Sft, offsets: Tuple[int, ...]) -> int:
    if offsets == tuple(range(len(offsets))):
        return count_blocks(x, len(offsets))
    return _pattern_count_automaton(x, offsets)


# ---------------------------------------------------------------------------
# de Bruijn graphs
# ---------------------------------------------------------------------------

def de_bruijn_graph(x: Sft, n: int) -> nx.DiGraph:
    """
    Vertices are allowed (n-1)-blocks keyed by their symbol-index tuples;
    B -> C for every allowed n-block with prefix B and suffix C. Nodes carry
    their Word as ``word``, edges the n-block as ``block``.
    """
    if n < 2:
        raise InvalidInputError(f"de Bruijn graph needs n >= 2, got {n}")
    graph = nx.DiGraph()
    for w in enumerate_blocks(x, n - 1):
        graph.add_node(tuple(w.data), word=w)
    for w in enumerate_blocks(x, n):
        graph.add_edge(tuple(w.data[:n - 1]), tuple(w.data[1:]), block=w)
    return graph


def is_irreducible(graph: nx.DiGraph) -> bool:
    return graph.number_of_nodes() > 0 and nx.is_strongly_connected(graph)


def de_bruijn_irreducibility_profile(x: Sft, n_values: Iterable[int]) -> Dict[int, bool]:
    """Irreducibility of the de Bruijn graphs; n < 2 has no graph and is skipped."""
    return {n: is_irreducible(de_bruijn_graph(x, n)) for n in n_values if n >= 2}
