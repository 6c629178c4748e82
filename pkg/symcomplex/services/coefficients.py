"""
Systems of coefficients c(n, k) over coordinate subsets.

Every weight depends only on the subset size k = |S|. All named systems are
integral representations c(n, k) = integral of x^k (1-x)^(n-k) against a
probability measure on [0, 1] that is symmetric about 1/2:

    uniform       point mass at 1/2                 c = 2^-n
    neural        Lebesgue measure                   c = 1 / ((n+1) binom(n, k))
    p_symmetric   (delta_p + delta_{1-p}) / 2        c = (p^k q^(n-k) + q^k p^(n-k)) / 2
    from_measure  atoms plus a Lebesgue component
"""
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence, Tuple

import numpy as np

from symcomplex.exceptions import InvalidInputError, InvariantViolationError

UNIFORM = "uniform"
NEURAL = "neural"
P_SYMMETRIC = "p_symmetric"
FROM_MEASURE = "from_measure"

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class CoefficientSystem:
    kind: str
    p: float = 0.5
    atoms: Tuple[Tuple[float, float], ...] = ()
    lebesgue_weight: float = 0.0

    def __post_init__(self):
        if self.kind not in (UNIFORM, NEURAL, P_SYMMETRIC, FROM_MEASURE):
            raise InvalidInputError(f"unknown coefficient system {self.kind!r}")
        if self.kind == P_SYMMETRIC and not 0.0 <= self.p <= 1.0:
            raise InvalidInputError(f"p must lie in [0, 1], got {self.p}")
        if self.kind == FROM_MEASURE:
            _check_symmetric_measure(self.atoms, self.lebesgue_weight)

    @classmethod
    def uniform(cls) -> "CoefficientSystem":
        return cls(UNIFORM)

    @classmethod
    def neural(cls) -> "CoefficientSystem":
        return cls(NEURAL)

    @classmethod
    def p_symmetric(cls, p: float) -> "CoefficientSystem":
        return cls(P_SYMMETRIC, p=p)

    @classmethod
    def from_measure(
        cls, atoms: Sequence[Tuple[float, float]] = (), lebesgue_weight: float = 0.0
    ) -> "CoefficientSystem":
        return cls(
            FROM_MEASURE,
            atoms=tuple((float(x), float(w)) for x, w in atoms),
            lebesgue_weight=float(lebesgue_weight),
        )

    @classmethod
    def parse(cls, text: str) -> "CoefficientSystem":
        """CLI form: uniform | neural | psym:<p>."""
        text = text.strip()
        if text == UNIFORM:
            return cls.uniform()
        if text == NEURAL:
            return cls.neural()
        if text.startswith("psym:"):
            try:
                return cls.p_symmetric(float(text[5:]))
            except ValueError:
                raise InvalidInputError(f"bad p in weights {text!r}")
        raise InvalidInputError(f"unknown weights {text!r}; expected uniform, neural or psym:<p>")

    @property
    def label(self) -> str:
        if self.kind == P_SYMMETRIC:
            return f"psym:{self.p:g}"
        return self.kind

    @property
    def is_uniform(self) -> bool:
        if self.kind == UNIFORM:
            return True
        if self.kind == P_SYMMETRIC:
            return self.p == 0.5
        return self.kind == FROM_MEASURE and self.lebesgue_weight == 0.0 and all(
            x == 0.5 for x, _ in self.atoms
        )

    def c(self, n: int, k: int) -> float:
        """Weight of one subset of size k in {0, ..., n-1}."""
        if n < 1 or not 0 <= k <= n:
            raise InvalidInputError(f"need n >= 1 and 0 <= k <= n, got n={n}, k={k}")
        if self.kind == UNIFORM:
            return 2.0 ** -n
        if self.kind == NEURAL:
            return 1.0 / ((n + 1) * comb(n, k))
        if self.kind == P_SYMMETRIC:
            p, q = self.p, 1.0 - self.p
            return 0.5 * (p ** k * q ** (n - k) + q ** k * p ** (n - k))
        value = sum(w * x ** k * (1.0 - x) ** (n - k) for x, w in self.atoms)
        if self.lebesgue_weight:
            # integral of x^k (1-x)^(n-k) dx = k! (n-k)! / (n+1)!
            value += self.lebesgue_weight * float(Fraction(1, (n + 1) * comb(n, k)))
        return value

    def coefficients(self, n: int) -> np.ndarray:
        """c(n, 0), ..., c(n, n)."""
        return np.array([self.c(n, k) for k in range(n + 1)])


def _check_symmetric_measure(atoms: Sequence[Tuple[float, float]], lebesgue_weight: float) -> None:
    if lebesgue_weight < 0 or any(w < 0 for _, w in atoms):
        raise InvariantViolationError("measure weights must be nonnegative")
    if any(not 0.0 <= x <= 1.0 for x, _ in atoms):
        raise InvariantViolationError("atoms must lie in [0, 1]")
    total = lebesgue_weight + sum(w for _, w in atoms)
    if abs(total - 1.0) > SYMMETRY_TOL:
        raise InvariantViolationError(f"measure must have total mass 1, got {total}")
    mass = {}
    for x, w in atoms:
        mass[x] = mass.get(x, 0.0) + w
    for x, w in mass.items():
        mirror = next((v for y, v in mass.items() if abs(y - (1.0 - x)) <= SYMMETRY_TOL), None)
        if mirror is None or abs(mirror - w) > SYMMETRY_TOL:
            raise InvariantViolationError(f"measure is not symmetric about 1/2 at atom {x}")


def coefficients(cs: CoefficientSystem, n: int) -> np.ndarray:
    return cs.coefficients(n)


def normalization_defect(cs: CoefficientSystem, n: int) -> float:
    """|sum_k binom(n, k) c(n, k) - 1|."""
    weights = cs.coefficients(n)
    return abs(sum(comb(n, k) * weights[k] for k in range(n + 1)) - 1.0)


def symmetry_defect(cs: CoefficientSystem, n: int) -> float:
    """max_k |c(n, k) - c(n, n-k)|."""
    weights = cs.coefficients(n)
    return float(np.max(np.abs(weights - weights[::-1])))


def validate(cs: CoefficientSystem, n: int, tol: float = SYMMETRY_TOL) -> None:
    """Raise InvariantViolationError unless the system is normalized and complement-symmetric at n."""
    if normalization_defect(cs, n) > tol:
        raise InvariantViolationError(f"{cs.label} weights do not sum to 1 at n={n}")
    if symmetry_defect(cs, n) > tol:
        raise InvariantViolationError(f"{cs.label} weights are not complement-symmetric at n={n}")
    if (cs.coefficients(n) < 0).any():
        raise InvariantViolationError(f"{cs.label} weights are negative at n={n}")
