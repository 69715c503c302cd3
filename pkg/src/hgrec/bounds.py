"""Closed-form sample-complexity bounds for hypergraph recovery.

Logarithms are natural logs throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import HypothesisViolated


@dataclass(frozen=True)
class BoundsInput:
    """Problem constants: edge count, range ratio, path bound, masking constants, targets."""

    m: int
    kappa: float
    L: int
    c_pi: float
    C_pi: float
    epsilon: float
    delta: float
    N: int | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if not 0 < self.c_pi <= 1:
            raise ValueError(f"c_pi must lie in (0, 1], got {self.c_pi}")
        if self.C_pi < 1:
            raise ValueError(f"C_pi must be >= 1, got {self.C_pi}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


def lower_bound_risk(m: int, n_samples: int) -> float:
    """Minimax reconstruction-error floor for m hyperedges and n_samples draws."""
    if n_samples < m:
        raise HypothesisViolated(f"the bound requires N >= m, got N={n_samples} < m={m}")
    return math.sqrt(m / n_samples) / 16.0


def mm_sample_bounds(b: BoundsInput) -> tuple[int, int]:
    """Sufficient (K, N) thresholds for masked-modeling recovery at (epsilon, delta)."""
    k_min = (
        2**14
        * b.m**2
        * b.kappa**2
        * b.L**2
        / (b.c_pi**2 * b.epsilon**2)
        * math.log(6 * b.m * b.C_pi / b.delta)
    )
    n_coverage = 2 * b.m * b.kappa / b.c_pi * math.log(3 * b.m * b.C_pi / b.delta)
    n_accuracy = 8 * b.m / b.epsilon**2 * math.log(6 * b.m / b.delta)
    return math.ceil(k_min), math.ceil(max(n_coverage, n_accuracy))


def lemma_rr_bounds(m0: int, kappa0: float) -> tuple[float, float]:
    """Extremes any m0-point distribution with range ratio kappa0 must respect.

    Returns (floor of the minimum probability, ceiling of the maximum).
    """
    if m0 < 1:
        raise ValueError(f"m0 must be >= 1, got {m0}")
    if kappa0 < 1:
        raise ValueError(f"kappa0 must be >= 1, got {kappa0}")
    return 1.0 / (m0 * kappa0), kappa0 / (m0 + kappa0 - 1.0)
