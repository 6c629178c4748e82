"""
Topological intricacy and average sample complexity of SFTs.

For a coordinate set S in {0..n-1} let N(S) be the number of patterns that
allowed words show on S. With a coefficient system c(n, k):

    Asc(n) = (1/n) sum_S c(n,|S|) log N(S)
    Int(n) = (1/n) sum_S c(n,|S|) [log N(S) + log N(S^c) - log N(n*)]

Everything here only needs A_k = sum over |S| = k of log N(S). Two ways to
get A_k:

* closed form, when M^2 > 0: N(S) is the product of block counts over the
  maximal runs of S, so A_k is a sum over run lengths;
* generic: one recursion over coordinates produces log N(S) for all 2^n
  subsets at once.
"""
from dataclasses import dataclass
from math import comb, log
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from symcomplex.config import settings
from symcomplex.exceptions import InvalidInputError, PreconditionError, ResourceBudgetError
from symcomplex.schemas.reports import IntricacyResult
from symcomplex.services.coefficients import CoefficientSystem
from symcomplex.services.subshift import Sft, count_blocks, entropy, primitive_exponent

COMPLEMENT = "complement"
IDENTITY = "identity"
CONVENTIONS = (COMPLEMENT, IDENTITY)

CLOSED_FORM = "closed_form"
GENERIC = "generic"


def _uniform(cs: Optional[CoefficientSystem]) -> CoefficientSystem:
    return cs if cs is not None else CoefficientSystem.uniform()


def _check_horizon(n: int) -> None:
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")


# ---------------------------------------------------------------------------
# Subset sums A_k
# ---------------------------------------------------------------------------

def _closed_form_sums(x: Sft, n: int) -> np.ndarray:
    """A_k for k = 0..n from run decompositions (requires M^2 > 0)."""
    g = [0.0] + [log(count_blocks(x, length)) for length in range(1, n + 1)]
    sums = np.zeros(n + 1)
    for length in range(1, n + 1):
        if g[length] == 0.0:
            continue
        for k in range(length, n + 1):
            ways = 0
            for start in range(n - length + 1):
                free = n - length - (start > 0) - (start + length < n)
                ways += comb(free, k - length)
            sums[k] += g[length] * ways
    return sums


def _reachable_masks(x: Sft, n: int) -> List[set]:
    levels = [{x.full_mask}]
    for _ in range(n - 1):
        nxt = set()
        for mask in levels[-1]:
            nxt.add(x.advance(mask))
            for symbol_mask in x.emission_masks:
                part = mask & symbol_mask
                if part:
                    nxt.add(x.advance(part))
        levels.append(nxt)
    return levels


def pattern_counts_all_subsets(x: Sft, n: int) -> np.ndarray:
    """
    N(S) for every S in {0..n-1}, indexed by the bitmask of S (bit j = coordinate j).

    F(t, m)[S'] counts patterns on the coordinates of S' in {t..n-1} for
    paths whose state at time t lies in m. It is linear in m's patterns, so
    one backward sweep over the reachable state sets gives the whole table.
    """
    _check_horizon(n)
    if n > settings.brute_force_max_n:
        raise ResourceBudgetError(
            f"all-subset pattern counts at n={n} exceed the brute-force limit",
            budget=settings.brute_force_max_n,
        )
    levels = _reachable_masks(x, n)
    following: Dict[int, np.ndarray] = {}
    for t in range(n - 1, -1, -1):
        current: Dict[int, np.ndarray] = {}
        for mask in levels[t]:
            parts = [mask & e for e in x.emission_masks if mask & e]
            if t == n - 1:
                current[mask] = np.array([1.0, float(len(parts))])
                continue
            vector = np.empty(2 * len(following[next(iter(following))]))
            vector[0::2] = following[x.advance(mask)]
            vector[1::2] = sum(following[x.advance(part)] for part in parts)
            current[mask] = vector
        following = current
    logger.debug(f"All-subset pattern counts for {x.name or 'sft'} at n={n}")
    return following[x.full_mask]


def _generic_sums(x: Sft, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """A_k by size and the per-mask log N table."""
    logs = np.log(pattern_counts_all_subsets(x, n))
    sizes = np.array([bin(mask).count("1") for mask in range(1 << n)])
    return np.bincount(sizes, weights=logs, minlength=n + 1), logs


def subset_log_sums(x: Sft, n: int, method: Optional[str] = None) -> np.ndarray:
    """
    A_k = sum over |S| = k of log N(S), for k = 0..n.

    Args:
        x: the SFT
        n: horizon
        method: "closed_form", "generic" or None (closed form whenever M^2 > 0)
    """
    _check_horizon(n)
    exponent = primitive_exponent(x)
    if method is None:
        method = CLOSED_FORM if exponent is not None and exponent <= 2 else GENERIC
    if method == CLOSED_FORM:
        if exponent is None or exponent > 2:
            raise PreconditionError("run decomposition needs M^2 > 0", sft=x.name)
        return _closed_form_sums(x, n)
    if method == GENERIC:
        return _generic_sums(x, n)[0]
    raise InvalidInputError(f"unknown subset-sum method {method!r}")


# ---------------------------------------------------------------------------
# Finite-n values
# ---------------------------------------------------------------------------

def _asc_from_sums(sums: np.ndarray, n: int, cs: CoefficientSystem) -> float:
    return float(np.dot(cs.coefficients(n), sums)) / n


def _int_from_sums(sums: np.ndarray, n: int, cs: CoefficientSystem, log_total: float, convention: str) -> float:
    if convention == COMPLEMENT:
        weights = cs.coefficients(n)
        return (float(np.dot(weights, sums + sums[::-1])) - log_total * _total_weight(cs, n)) / n
    if convention == IDENTITY:
        return 2.0 * _asc_from_sums(sums, n, cs) - log_total / n
    raise InvalidInputError(f"unknown intricacy convention {convention!r}; expected {CONVENTIONS}")


def _total_weight(cs: CoefficientSystem, n: int) -> float:
    weights = cs.coefficients(n)
    return float(sum(comb(n, k) * weights[k] for k in range(n + 1)))


def asc_finite(x: Sft, n: int, cs: Optional[CoefficientSystem] = None, method: Optional[str] = None) -> float:
    """Average sample complexity at horizon n."""
    cs = _uniform(cs)
    return _asc_from_sums(subset_log_sums(x, n, method), n, cs)


def int_finite(
    x: Sft,
    n: int,
    cs: Optional[CoefficientSystem] = None,
    convention: str = COMPLEMENT,
    method: Optional[str] = None,
) -> float:
    """
    Intricacy at horizon n.

    ``complement`` sums log N(S) + log N(S^c) - log N(n*) against the
    weights; ``identity`` is 2 Asc(n) - log N(n*)/n. They agree for
    complement-symmetric normalized weights.
    """
    cs = _uniform(cs)
    sums = subset_log_sums(x, n, method)
    return _int_from_sums(sums, n, cs, log(count_blocks(x, n)), convention)


def intricacy_finite(
    x: Sft, n: int, cs: Optional[CoefficientSystem] = None, method: Optional[str] = None
) -> IntricacyResult:
    cs = _uniform(cs)
    sums = subset_log_sums(x, n, method)
    log_total = log(count_blocks(x, n))
    complement = _int_from_sums(sums, n, cs, log_total, COMPLEMENT)
    identity = _int_from_sums(sums, n, cs, log_total, IDENTITY)
    return IntricacyResult(
        asc=_asc_from_sums(sums, n, cs),
        int=complement,
        n=n,
        weights=cs.label,
        method="brute",
        metadata={
            "int_identity": identity,
            "log_block_count": log_total,
            "block_count_entropy": log_total / n,
        },
    )


def asc_profile(
    x: Sft, n_max: int, cs: Optional[CoefficientSystem] = None, method: Optional[str] = None
) -> List[IntricacyResult]:
    """Asc(n) and Int(n) for n = 1..n_max, both Int conventions recorded."""
    _check_horizon(n_max)
    if n_max > settings.brute_force_max_n:
        raise ResourceBudgetError(
            f"profile up to n={n_max} exceeds the brute-force limit", budget=settings.brute_force_max_n
        )
    return [intricacy_finite(x, n, cs, method) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesTruncation:
    terms: int
    tail_bound: float


def series_truncation(alphabet_size: int, tol: Optional[float] = None) -> SeriesTruncation:
    """Least K with sum_{k>K} k log r / 2^k = log r (K+2) / 2^K below tol."""
    tol = settings.series_tail_tol if tol is None else tol
    if tol <= 0:
        raise InvalidInputError(f"tolerance must be positive, got {tol}")
    log_r = log(alphabet_size) if alphabet_size > 1 else 0.0
    terms = 1
    while log_r * (terms + 2) / 2.0 ** terms >= tol:
        terms += 1
    return SeriesTruncation(terms, log_r * (terms + 2) / 2.0 ** terms)


def asc_sft_series(
    x: Sft, cs: Optional[CoefficientSystem] = None, tol: Optional[float] = None
) -> IntricacyResult:
    """
    Limit Asc of an SFT with M^2 > 0 under uniform weights:

        Asc = (1/4) sum_{k >= 1} log |L_k| / 2^k

    Int is 2 Asc - h_top.

    Raises:
        PreconditionError: M^2 not positive, or non-uniform weights
    """
    cs = _uniform(cs)
    if not cs.is_uniform:
        raise PreconditionError(
            "the series holds for uniform weights only; use a finite-n profile", weights=cs.label
        )
    exponent = primitive_exponent(x)
    if exponent is None or exponent > 2:
        raise PreconditionError(
            "the series needs M^2 > 0; use the brute-force profile instead", sft=x.name
        )
    truncation = series_truncation(x.symbols.size, tol)
    total = sum(log(count_blocks(x, k)) / 2.0 ** k for k in range(1, truncation.terms + 1))
    asc = total / 4.0
    h = entropy(x)
    logger.debug(f"Asc series for {x.name or 'sft'}: K={truncation.terms}, tail<{truncation.tail_bound:.3g}")
    return IntricacyResult(
        asc=asc,
        int=2.0 * asc - h,
        n="limit",
        weights=cs.label,
        method="series",
        metadata={"h": h, "terms": truncation.terms, "tail_bound": truncation.tail_bound},
    )


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def subadditivity_defects(x: Sft, m_max: int, method: Optional[str] = None) -> Dict[str, object]:
    """
    Check b_{m+n} <= b_m + b_n for b_n = n Asc(n) (uniform weights) and
    Asc(n) <= log N(n*)/n, for m, n <= m_max.

    Returns:
        {"max_defect": largest b_{m+n} - b_m - b_n, "violations": [(m, n, defect)],
         "entropy_chain": [(n, asc, log N(n*)/n)], "chain_holds": bool}
    """
    horizon = 2 * m_max
    if horizon > settings.brute_force_max_n and (primitive_exponent(x) or 3) > 2:
        raise ResourceBudgetError(
            f"subadditivity check to n={horizon} exceeds the brute-force limit",
            budget=settings.brute_force_max_n,
        )
    cs = CoefficientSystem.uniform()
    b = {n: n * asc_finite(x, n, cs, method) for n in range(1, horizon + 1)}
    violations = []
    max_defect = float("-inf")
    for m in range(1, m_max + 1):
        for n in range(m, m_max + 1):
            defect = b[m + n] - b[m] - b[n]
            max_defect = max(max_defect, defect)
            if defect > 1e-9:
                violations.append((m, n, defect))
    chain = [(n, b[n] / n, log(count_blocks(x, n)) / n) for n in range(1, horizon + 1)]
    return {
        "max_defect": max_defect,
        "violations": violations,
        "entropy_chain": chain,
        "chain_holds": all(asc <= bound + 1e-12 for _, asc, bound in chain),
    }
