"""
Maximizers of entropy, Asc and Int over parameterized Markov families.

Multi-start search: every point of a regular grid on [0, 1]^d (exact 0 and 1
included) is probed, the grid's local maxima are refined (golden section in
one dimension, bounded Nelder-Mead otherwise), and refined points closer
than the separation threshold are merged.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.optimize import minimize, minimize_scalar

from symcomplex.config import settings
from symcomplex.exceptions import InvalidInputError, ResourceBudgetError, SymbolicComplexityError
from symcomplex.schemas.reports import Maximum, OptimizationReport
from symcomplex.services.markov import MarkovMeasure, asc_mu, build_rstep, entropy_rate, free_parameters, int_mu
from symcomplex.services.subshift import Sft, load

TARGETS: Dict[str, Callable[[MarkovMeasure], float]] = {
    "entropy": entropy_rate,
    "asc": asc_mu,
    "int": int_mu,
}


@dataclass(frozen=True)
class MarkovFamily:
    """All ``order``-step measures on an SFT, coordinates = ``parameters``."""

    sft: Sft
    order: int
    parameters: Tuple[str, ...]

    @property
    def name(self) -> str:
        return f"{self.sft.name or 'sft'}/order{self.order}"

    @property
    def dimension(self) -> int:
        return len(self.parameters)

    def measure(self, values: Sequence[float]) -> MarkovMeasure:
        return build_rstep(self.sft, self.order, dict(zip(self.parameters, (float(v) for v in values))))


def family(sft: Union[str, Sft], order: int = 1) -> MarkovFamily:
    x = load(sft) if isinstance(sft, str) else sft
    parameters = tuple(free_parameters(x, order))
    if not parameters:
        raise InvalidInputError(f"{x.name or 'the SFT'} carries a single {order}-step measure; nothing to optimize")
    return MarkovFamily(x, order, parameters)


def _objective(fam: MarkovFamily, target: str) -> Callable[[Sequence[float]], float]:
    function = TARGETS[target]

    def value(point: Sequence[float]) -> float:
        if any(not 0.0 <= v <= 1.0 for v in point):
            return float("-inf")
        try:
            return float(function(fam.measure(point)))
        except SymbolicComplexityError:
            return float("-inf")

    return value


def _grid_axis(spacing: float) -> np.ndarray:
    steps = int(round(1.0 / spacing))
    if steps < 2 or abs(steps * spacing - 1.0) > 1e-9:
        raise InvalidInputError(f"grid spacing must divide 1 into at least 2 steps, got {spacing}")
    return np.linspace(0.0, 1.0, steps + 1)


def _grid_local_maxima(values: np.ndarray) -> List[Tuple[int, ...]]:
    """Indices whose value is finite and >= every neighbor in the 3^d block."""
    maxima = []
    offsets = [o for o in product((-1, 0, 1), repeat=values.ndim) if any(o)]
    for index in np.ndindex(values.shape):
        value = values[index]
        if not np.isfinite(value):
            continue
        is_max = True
        for offset in offsets:
            neighbor = tuple(i + o for i, o in zip(index, offset))
            if all(0 <= j < s for j, s in zip(neighbor, values.shape)) and values[neighbor] > value:
                is_max = False
                break
        if is_max:
            maxima.append(index)
    return maxima


def _refine_1d(
    value: Callable, axis: np.ndarray, i: int, grid_values: np.ndarray, eps: float, xatol: float
) -> Tuple[np.ndarray, float]:
    def neg(t: float) -> float:
        return -value([t])

    inside = 0 < i < len(axis) - 1
    if inside and grid_values[i - 1] < grid_values[i] > grid_values[i + 1]:
        result = minimize_scalar(
            neg, bracket=(axis[i - 1], axis[i], axis[i + 1]), method="golden", options={"xtol": xatol}
        )
    else:
        lo = max(eps, axis[max(i - 1, 0)])
        hi = min(1.0 - eps, axis[min(i + 1, len(axis) - 1)])
        result = minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": xatol})
    return np.array([float(result.x)]), -float(result.fun)


def _refine_nd(
    value: Callable, start: np.ndarray, spacing: float, eps: float, xatol: float, rng: np.random.Generator, jitter: float
) -> Tuple[np.ndarray, float]:
    d = len(start)
    x0 = np.clip(start, eps, 1.0 - eps)
    simplex = [x0]
    for k in range(d):
        vertex = x0.copy()
        step = spacing / 2 if x0[k] + spacing / 2 <= 1.0 - eps else -spacing / 2
        vertex[k] += step
        simplex.append(vertex)
    simplex = np.array(simplex)
    if jitter:
        simplex = np.clip(simplex + rng.uniform(-jitter, jitter, simplex.shape), eps, 1.0 - eps)
    result = minimize(
        lambda point: -value(point),
        x0,
        method="Nelder-Mead",
        bounds=[(eps, 1.0 - eps)] * d,
        options={"xatol": xatol, "fatol": 1e-14, "maxiter": 4000 * d, "initial_simplex": simplex},
    )
    return np.asarray(result.x, dtype=float), -float(result.fun)


def _snap_to_boundary(value: Callable, point: np.ndarray, best: float, eps: float) -> Tuple[np.ndarray, float]:
    """Move coordinates within a few eps of 0 or 1 onto the boundary if that is no worse."""
    snapped = point.copy()
    snapped[snapped <= 10 * eps] = 0.0
    snapped[snapped >= 1.0 - 10 * eps] = 1.0
    if np.array_equal(snapped, point):
        return point, best
    snapped_value = value(snapped)
    if snapped_value >= best - 1e-12:
        return snapped, snapped_value
    return point, best


def _deduplicate(candidates: List[Tuple[np.ndarray, float]], separation: float) -> List[Tuple[np.ndarray, float]]:
    kept: List[Tuple[np.ndarray, float]] = []
    for point, val in sorted(candidates, key=lambda c: (-c[1], tuple(c[0]))):
        if all(np.linalg.norm(point - other) >= separation for other, _ in kept):
            kept.append((point, val))
    return sorted(kept, key=lambda c: (-c[1], tuple(c[0])))


def optimize(
    fam: MarkovFamily,
    target: str,
    budget: Optional[int] = None,
    grid: Optional[float] = None,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
    jitter: float = 0.0,
) -> OptimizationReport:
    """
    Local maxima of ``target`` over the family's parameter box.

    Args:
        fam: the Markov family
        target: "entropy", "asc" or "int"
        budget: maximum number of grid probes
        grid: grid spacing (must divide 1)
        threads: worker threads for the grid probes
        seed: seeds the start-simplex jitter
        jitter: uniform perturbation of Nelder-Mead start simplices (0 = none)

    Returns:
        OptimizationReport with maxima sorted by value, then parameters.

    Raises:
        InvalidInputError: unknown target or bad grid
        ResourceBudgetError: grid larger than the probe budget
    """
    if target not in TARGETS:
        raise InvalidInputError(f"unknown target {target!r}; expected one of {', '.join(TARGETS)}")
    spacing = settings.optimizer_grid if grid is None else grid
    budget = settings.optimizer_max_probes if budget is None else budget
    threads = settings.threads if threads is None else threads
    seed = settings.seed if seed is None else seed
    eps, xatol = settings.optimizer_eps, settings.optimizer_xatol

    axis = _grid_axis(spacing)
    probes = len(axis) ** fam.dimension
    if probes > budget:
        raise ResourceBudgetError(
            f"{probes} grid probes for a {fam.dimension}-parameter family exceed the budget", budget=budget
        )
    value = _objective(fam, target)
    points = list(product(axis, repeat=fam.dimension))
    logger.debug(f"Probing {probes} grid points for {target} on {fam.name} with {threads} thread(s)")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        grid_values = np.array(list(pool.map(value, points))).reshape((len(axis),) * fam.dimension)

    rng = np.random.default_rng(seed)
    candidates = []
    for index in _grid_local_maxima(grid_values):
        start = np.array([axis[i] for i in index])
        start_value = float(grid_values[index])
        if fam.dimension == 1:
            point, best = _refine_1d(value, axis, index[0], grid_values, eps, xatol)
        else:
            point, best = _refine_nd(value, start, spacing, eps, xatol, rng, jitter)
        point, best = _snap_to_boundary(value, point, best, eps)
        if start_value >= best:
            point, best = start, start_value
        candidates.append((point, best))

    maxima = _deduplicate(candidates, settings.maxima_separation)
    logger.debug(f"{len(candidates)} grid maxima refined to {len(maxima)} distinct maxima")
    return OptimizationReport(
        target=target,
        family=fam.name,
        maxima=[
            Maximum(parameters={k: float(v) for k, v in zip(fam.parameters, point)}, value=val)
            for point, val in maxima
        ],
        metadata={
            "parameters": list(fam.parameters),
            "grid": spacing,
            "probes": probes,
            "grid_maxima": len(candidates),
            "refinement": "golden" if fam.dimension == 1 else "nelder-mead",
            "xatol": xatol,
            "seed": seed,
        },
    )
