"""
Stationary r-step Markov measures on SFTs.

An r-step measure is carried by a block chain: its states are the allowed
paths of r SFT states and a block can only move to a block that overlaps it
in r-1 places. The symbol read at time t is the emission of the first state
of the block, so the chain's symbol process is the measure on the SFT.

Transition parameters are named ``P`` + context + next symbol, e.g. ``P00``
for a 1-step chain going from 0 to 0, ``P100`` for a 2-step chain going from
context 10 to symbol 0. In each context one successor may be left out; it
takes the remaining mass.
"""
from dataclasses import dataclass, field
from functools import cached_property
from math import ceil, log, log2
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.linalg import null_space
from scipy.stats import entropy as shannon_entropy

from symcomplex.config import settings
from symcomplex.exceptions import (
    InvalidInputError,
    InvariantViolationError,
    PreconditionError,
    ReducibleChainError,
    ResourceBudgetError,
)
from symcomplex.schemas.reports import MarkovEvaluation
from symcomplex.services.coefficients import CoefficientSystem
from symcomplex.services.subshift import Sft, named, paths, spectral_radius
from symcomplex.services.words import Word

ROW_TOL = 1e-12
STATIONARY_TOL = 1e-10
NEGATIVE_INT_TOL = 1e-9

Block = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """
    Block chain over allowed r-blocks of an SFT.

    Attributes:
        base: the SFT carrying the measure
        order: r >= 1
        blocks: chain states, each a path of ``order`` SFT states
        transition: row-stochastic matrix over ``blocks``
        stationary: probability vector with pP = p
        parameters: named transition probabilities the measure was built from
    """

    base: Sft
    order: int
    blocks: Tuple[Block, ...]
    transition: np.ndarray
    stationary: np.ndarray
    parameters: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        P, p = self.transition, self.stationary
        d = len(self.blocks)
        if P.shape != (d, d) or p.shape != (d,):
            raise InvalidInputError(f"transition must be {d}x{d} and stationary of length {d}")
        if (P < 0).any() or np.abs(P.sum(axis=1) - 1.0).max() > ROW_TOL:
            raise InvariantViolationError("transition rows must be probability vectors")
        allowed = _allowed_block_transitions(self.base, self.blocks)
        if (P[~allowed] > 0).any():
            raise InvariantViolationError("transition puts mass on a transition the SFT forbids")
        if abs(p.sum() - 1.0) > STATIONARY_TOL or np.abs(p @ P - p).sum() > STATIONARY_TOL:
            raise InvariantViolationError("stationary vector does not satisfy pP = p")

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def symbol_count(self) -> int:
        return self.base.symbols.size

    @cached_property
    def symbol_matrix(self) -> np.ndarray:
        """One-hot (blocks x symbols) map from a block to the symbol it reads."""
        Q = np.zeros((self.size, self.symbol_count))
        for i, block in enumerate(self.blocks):
            Q[i, self.base.emission[block[0]]] = 1.0
        return Q

    @cached_property
    def marginal(self) -> np.ndarray:
        """Stationary distribution of the time-0 symbol."""
        return self.stationary @ self.symbol_matrix

    @property
    def label(self) -> str:
        return f"{self.base.name or 'sft'}/order{self.order}"


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def chain_blocks(x: Sft, order: int) -> Tuple[Block, ...]:
    if order < 1:
        raise InvalidInputError(f"order must be >= 1, got {order}")
    return tuple(sorted(tuple(path) for path in paths(x, order)))


def _successors(x: Sft, block: Block) -> List[Block]:
    return [block[1:] + (t,) for t in range(x.size) if x.adjacency[block[-1]][t]]


def _allowed_block_transitions(x: Sft, blocks: Sequence[Block]) -> np.ndarray:
    index = {b: i for i, b in enumerate(blocks)}
    allowed = np.zeros((len(blocks), len(blocks)), dtype=bool)
    for i, block in enumerate(blocks):
        for nxt in _successors(x, block):
            allowed[i, index[nxt]] = True
    return allowed


def context_word(x: Sft, block: Block) -> str:
    """Original-symbol text of a block (the context of its next symbol)."""
    symbols = [x.symbols.label(x.emission[s]) for s in block]
    tail = x.state_word(block[-1]).labels()[1:]
    return "".join(symbols + tail)


def _next_symbol(x: Sft, successor: Block) -> str:
    return x.state_word(successor[-1]).labels()[-1]


def transition_key(x: Sft, block: Block, successor: Block) -> str:
    return "P" + context_word(x, block) + _next_symbol(x, successor)


def _ordered_successors(x: Sft, block: Block) -> List[Block]:
    """Successors with the one repeating the context's last symbol first."""
    last = context_word(x, block)[-1]
    successors = _successors(x, block)
    return sorted(successors, key=lambda s: _next_symbol(x, s) != last)


def free_parameters(x: Sft, order: int) -> List[str]:
    """
    Parameter names of the natural family of ``order``-step measures on x.

    Every context with m >= 2 successors contributes m - 1 names; the
    repeat of the context's last symbol comes first and the last successor
    takes the remainder.
    """
    names = []
    for block in chain_blocks(x, order):
        successors = _ordered_successors(x, block)
        names.extend(transition_key(x, block, s) for s in successors[:-1])
    return names


def stationary_vector(P: np.ndarray) -> np.ndarray:
    """
    Unique stationary vector of a stochastic matrix.

    Small chains: null space of P^T - I, which must be one-dimensional.
    Transient blocks are allowed and get zero mass. Large chains: power
    iteration on the lazy chain (P + I)/2.

    Raises:
        ReducibleChainError: more than one recurrent class
    """
    d = len(P)
    if d <= settings.stationary_direct_max_dim:
        basis = null_space(P.T - np.eye(d), rcond=1e-10)
        if basis.shape[1] != 1:
            raise ReducibleChainError(
                f"chain has {basis.shape[1]} independent stationary vectors", dimension=d
            )
        vector = basis[:, 0] / basis[:, 0].sum()
        if (vector < -1e-10).any():
            raise InvariantViolationError("stationary vector has negative entries")
        vector = np.clip(vector, 0.0, None)
        logger.debug(f"Stationary vector by direct solve (dimension {d})")
        return vector / vector.sum()
    lazy = 0.5 * (P + np.eye(d))
    vector = np.full(d, 1.0 / d)
    for iteration in range(1, settings.power_iteration_max_iter + 1):
        image = vector @ lazy
        if np.abs(image - vector).sum() <= settings.power_iteration_tol:
            logger.debug(f"Stationary vector by power iteration after {iteration} steps (dimension {d})")
            return image / image.sum()
        vector = image
    raise PreconditionError("power iteration for the stationary vector did not converge", dimension=d)


def _measure(x: Sft, order: int, blocks: Tuple[Block, ...], P: np.ndarray, parameters: Dict[str, float]) -> MarkovMeasure:
    return MarkovMeasure(
        base=x,
        order=order,
        blocks=blocks,
        transition=P,
        stationary=stationary_vector(P),
        parameters=parameters,
    )


def build_rstep(x: Sft, order: int, params: Mapping[str, float]) -> MarkovMeasure:
    """
    r-step measure from named transition probabilities.

    Args:
        x: the SFT
        order: r >= 1
        params: ``P<context><symbol>`` -> probability. In each context at most
            one successor may be missing; it takes 1 minus the others.

    Raises:
        InvalidInputError: probability outside [0, 1], unknown or forbidden
            transition with positive mass, missing parameters, rows not summing to 1
        ReducibleChainError: stationary vector not unique
    """
    blocks = chain_blocks(x, order)
    index = {b: i for i, b in enumerate(blocks)}
    params = {str(k): float(v) for k, v in params.items()}
    for key, value in params.items():
        if not 0.0 <= value <= 1.0:
            raise InvalidInputError(f"probability {key}={value} outside [0, 1]")

    P = np.zeros((len(blocks), len(blocks)))
    used = set()
    for i, block in enumerate(blocks):
        successors = _ordered_successors(x, block)
        missing = []
        mass = 0.0
        for successor in successors:
            key = transition_key(x, block, successor)
            if key in params:
                P[i, index[successor]] = params[key]
                mass += params[key]
                used.add(key)
            else:
                missing.append(successor)
        if len(missing) > 1:
            names = [transition_key(x, block, s) for s in missing[:-1]]
            raise InvalidInputError(f"context {context_word(x, block)!r} needs values for {names}")
        if missing:
            remainder = 1.0 - mass
            if remainder < -ROW_TOL:
                raise InvalidInputError(f"context {context_word(x, block)!r} has total mass {mass} > 1")
            P[i, index[missing[0]]] = max(remainder, 0.0)
        elif abs(mass - 1.0) > ROW_TOL:
            raise InvalidInputError(f"context {context_word(x, block)!r} sums to {mass}, not 1")

    for key in set(params) - used:
        if params[key] > 0:
            raise InvalidInputError(f"{key} is not an allowed transition of {x.name or 'the SFT'}")

    P = P / P.sum(axis=1, keepdims=True)
    return _measure(x, order, blocks, P, {k: params[k] for k in sorted(used)})


def from_transition_matrix(x: Sft, P: Union[np.ndarray, Sequence[Sequence[float]]], order: int = 1) -> MarkovMeasure:
    """Measure from an explicit stochastic matrix over the chain blocks (in ``chain_blocks`` order)."""
    blocks = chain_blocks(x, order)
    P = np.asarray(P, dtype=float)
    if P.shape != (len(blocks), len(blocks)):
        raise InvalidInputError(f"transition matrix must be {len(blocks)}x{len(blocks)}, got {P.shape}")
    if (P < 0).any() or (P > 1).any():
        raise InvalidInputError("transition probabilities must lie in [0, 1]")
    if (P[~_allowed_block_transitions(x, blocks)] > 0).any():
        raise InvalidInputError("transition matrix puts mass on forbidden transitions")
    if np.abs(P.sum(axis=1) - 1.0).max() > 1e-9:
        raise InvalidInputError("transition rows must sum to 1")
    P = P / P.sum(axis=1, keepdims=True)
    parameters = {
        transition_key(x, block, nxt): float(P[i, j])
        for i, block in enumerate(blocks)
        for j, nxt in enumerate(blocks)
        if P[i, j] > 0
    }
    return _measure(x, order, blocks, P, parameters)


def parry(x: Sft) -> MarkovMeasure:
    """
    Measure of maximal entropy: P_ij = M_ij v_j / (lambda v_i) with v the
    right Perron vector.
    """
    M = x.matrix.astype(float)
    radius = spectral_radius(x)
    values, vectors = np.linalg.eig(M)
    v = np.abs(np.real(vectors[:, np.argmin(np.abs(values - radius))]))
    if (v <= 1e-14).any():
        raise PreconditionError("Parry measure needs an irreducible SFT", sft=x.name)
    P = M * v[None, :] / (radius * v[:, None])
    P = P / P.sum(axis=1, keepdims=True)
    return from_transition_matrix(x, P)


def golden_mean_1step(p00: float) -> MarkovMeasure:
    """P = [[p00, 1-p00], [1, 0]] on the golden mean shift."""
    return build_rstep(named("golden"), 1, {"P00": p00})


def golden_mean_2step(p000: float, p100: float) -> MarkovMeasure:
    """Blocks 00, 01, 10; 00 -> 00 with p000, 10 -> 00 with p100, 01 -> 10 always."""
    return build_rstep(named("golden"), 2, {"P000": p000, "P100": p100})


def full2_1step(p00: float, p11: float) -> MarkovMeasure:
    return build_rstep(named("full2"), 1, {"P00": p00, "P11": p11})


# ---------------------------------------------------------------------------
# Entropies and the conditional-entropy series
# ---------------------------------------------------------------------------

def entropy_rate(m: MarkovMeasure) -> float:
    """h = -sum_i p_i sum_j P_ij log P_ij (natural log)."""
    return float(sum(p_i * shannon_entropy(row) for p_i, row in zip(m.stationary, m.transition) if p_i > 0))


def marginal_entropy(m: MarkovMeasure) -> float:
    """H(alpha), the entropy of the time-0 symbol."""
    return float(shannon_entropy(m.marginal))


def _pair_entropy(m: MarkovMeasure, power: np.ndarray) -> float:
    joint = m.symbol_matrix.T @ (m.stationary[:, None] * power) @ m.symbol_matrix
    return float(shannon_entropy(np.clip(joint.ravel(), 0.0, None)))


def conditional_entropy_at_lag(m: MarkovMeasure, i: int) -> float:
    """H(alpha | alpha_i): symbol at time 0 given the symbol at time i."""
    if i < 1:
        raise InvalidInputError(f"lag must be >= 1, got {i}")
    power = np.linalg.matrix_power(m.transition, i)
    return max(0.0, _pair_entropy(m, power) - marginal_entropy(m))


def _series_terms(symbol_count: int, tol: float) -> int:
    if symbol_count <= 1:
        return 1
    return max(1, ceil(log2(log(symbol_count) / tol)) + 1)


def conditional_entropy_profile(m: MarkovMeasure, lags: int) -> List[float]:
    """H(alpha | alpha_i) for i = 1..lags."""
    marginal = marginal_entropy(m)
    power = np.eye(m.size)
    values = []
    for _ in range(lags):
        power = power @ m.transition
        values.append(max(0.0, _pair_entropy(m, power) - marginal))
    return values


def asc_mu(m: MarkovMeasure, tol: Optional[float] = None) -> float:
    """
    (1/2) sum_i 2^-i H(alpha | alpha_i), stopped once the tail
    2^-K log(#symbols) is below ``tol``.
    """
    tol = settings.markov_series_tol if tol is None else tol
    if tol <= 0:
        raise InvalidInputError(f"tolerance must be positive, got {tol}")
    terms = _series_terms(m.symbol_count, tol)
    profile = conditional_entropy_profile(m, terms)
    return 0.5 * sum(h / 2.0 ** i for i, h in enumerate(profile, start=1))


def int_mu(m: MarkovMeasure, tol: Optional[float] = None) -> float:
    """2 Asc - h, clamped to 0 with a warning when round-off drives it negative."""
    value = 2.0 * asc_mu(m, tol) - entropy_rate(m)
    if value < 0:
        if value < -NEGATIVE_INT_TOL:
            logger.warning(f"Negative intricacy {value:.3g} for {m.label} {m.parameters}; clamped to 0")
        return 0.0
    return value


def evaluate(m: MarkovMeasure, tol: Optional[float] = None) -> MarkovEvaluation:
    tol = settings.markov_series_tol if tol is None else tol
    h = entropy_rate(m)
    asc = asc_mu(m, tol)
    terms = _series_terms(m.symbol_count, tol)
    return MarkovEvaluation(
        sft=m.base.name or "sft",
        order=m.order,
        parameters=m.parameters,
        h=h,
        asc=asc,
        int=int_mu(m, tol),
        marginal_entropy=marginal_entropy(m),
        metadata={
            "terms": terms,
            "tail_bound": 0.5 * log(max(m.symbol_count, 1)) / 2.0 ** terms,
            "stationary": [float(v) for v in m.stationary],
            "blocks": [context_word(m.base, b) for b in m.blocks],
        },
    )


# ---------------------------------------------------------------------------
# Finite-n values
# ---------------------------------------------------------------------------

def cylinder_probability(m: MarkovMeasure, word: Union[Word, Sequence[int]]) -> float:
    """mu[w_0 ... w_k] at coordinates 0..k."""
    data = word.data if isinstance(word, Word) else tuple(word)
    if not data:
        return 1.0
    Q = m.symbol_matrix
    if any(not 0 <= a < m.symbol_count for a in data):
        raise InvalidInputError(f"word {data} uses symbols outside the alphabet")
    vector = m.stationary * Q[:, data[0]]
    for a in data[1:]:
        vector = (vector @ m.transition) * Q[:, a]
    return float(vector.sum())


def subset_entropies(m: MarkovMeasure, n: int) -> np.ndarray:
    """
    H(alpha_S) for every S in {0..n-1}, indexed by bitmask (bit j = coordinate j).

    Only sets containing 0 are computed; stationarity gives the rest by
    translation. Each set carries the joint law of its pattern and the
    current block, one row per pattern of positive mass.
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if n > settings.markov_brute_max_n:
        raise ResourceBudgetError(
            f"subset entropies at n={n} exceed the brute-force limit", budget=settings.markov_brute_max_n
        )
    Q = m.symbol_matrix
    powers = [np.eye(m.size)]
    for _ in range(n):
        powers.append(powers[-1] @ m.transition)
    values = np.zeros(1 << n)

    def split(rows: np.ndarray) -> np.ndarray:
        joint = (rows[:, None, :] * Q.T[None, :, :]).reshape(-1, m.size)
        return joint[joint.sum(axis=1) > 0]

    stack = [(0, 1, split(m.stationary[None, :]))]
    while stack:
        t, mask, rows = stack.pop()
        values[mask] = shannon_entropy(rows.sum(axis=1))
        for u in range(t + 1, n):
            stack.append((u, mask | 1 << u, split(rows @ powers[u - t])))

    for mask in range(2, 1 << n):
        if not mask & 1:
            shifted = mask
            while not shifted & 1:
                shifted >>= 1
            values[mask] = values[shifted]
    return values


def _subset_sizes(n: int) -> np.ndarray:
    return np.array([bin(mask).count("1") for mask in range(1 << n)])


def brute_asc_mu(m: MarkovMeasure, n: int, cs: Optional[CoefficientSystem] = None) -> float:
    """(1/n) sum_S c_S H(alpha_S)."""
    cs = cs or CoefficientSystem.uniform()
    values = subset_entropies(m, n)
    weights = cs.coefficients(n)[_subset_sizes(n)]
    return float(np.dot(weights, values)) / n


def _complement_terms(m: MarkovMeasure, n: int, cs: CoefficientSystem) -> float:
    values = subset_entropies(m, n)
    full = (1 << n) - 1
    complements = values[np.arange(1 << n) ^ full]
    weights = cs.coefficients(n)[_subset_sizes(n)]
    return float(np.dot(weights, values + complements - values[full]))


def brute_int_mu(m: MarkovMeasure, n: int, cs: Optional[CoefficientSystem] = None) -> float:
    """(1/n) sum_S c_S [H(alpha_S) + H(alpha_{S^c}) - H(alpha_{n*})]."""
    return _complement_terms(m, n, cs or CoefficientSystem.uniform()) / n


def neural_complexity(m: MarkovMeasure, n: int, cs: Optional[CoefficientSystem] = None) -> float:
    """sum_S c_S MI(X_S; X_{S^c}) for the n-coordinate marginal (neural weights by default)."""
    return _complement_terms(m, n, cs or CoefficientSystem.neural())


# ---------------------------------------------------------------------------
# Regression fixtures (P..., h, asc, int), three decimals
# ---------------------------------------------------------------------------

GOLDEN_1STEP_TABLE = (
    ({"P00": 0.618}, 0.481, 0.266, 0.051),
    ({"P00": 0.533}, 0.471, 0.271, 0.071),
    ({"P00": 0.216}, 0.292, 0.208, 0.124),
)

GOLDEN_2STEP_TABLE = (
    ({"P000": 0.618, "P100": 0.618}, 0.481, 0.266, 0.051),
    ({"P000": 0.483, "P100": 0.569}, 0.466, 0.272, 0.078),
    ({"P000": 0.0, "P100": 0.275}, 0.344, 0.221, 0.167),
)

FULL2_1STEP_TABLE = (
    ({"P00": 0.5, "P11": 0.5}, 0.693, 0.347, 0.0),
    ({"P00": 0.216, "P11": 0.0}, 0.292, 0.208, 0.124),
    ({"P00": 0.0, "P11": 0.216}, 0.292, 0.208, 0.124),
    ({"P00": 0.905, "P11": 0.905}, 0.315, 0.209, 0.104),
)
