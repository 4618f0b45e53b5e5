"""Polynomial free-boundary candidates s_K(t) = l + sum_j b_j t^j."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["BoundaryModel"]

# admissibility margin for the lower bound s > 0 and upper bound s <= L
CONSTRAINT_MARGIN = 1e-6


@dataclass(frozen=True)
class BoundaryModel:
    """Boundary curve anchored at s(0) = l with monomial shape functions
    t^1 .. t^K; the offset l absorbs the initial position so every candidate
    automatically satisfies s(0) = l."""

    l: float
    coefficients: np.ndarray = field(repr=True)

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           np.atleast_1d(np.asarray(self.coefficients, dtype=float)))

    @property
    def K(self) -> int:
        return len(self.coefficients)

    def s_eval(self, t):
        t = np.asarray(t, dtype=float)
        powers = t[..., None] ** np.arange(1, self.K + 1)
        out = self.l + powers @ self.coefficients
        return out if out.shape else float(out)

    def s_dot_eval(self, t):
        t = np.asarray(t, dtype=float)
        j = np.arange(1, self.K + 1)
        powers = t[..., None] ** (j - 1)
        out = powers @ (j * self.coefficients)
        return out if out.shape else float(out)

    def constraint_violation(self, times, upper: float) -> float:
        """Summed squared violation of 0 < s(t) <= L over the sample times;
        zero when the boundary stays inside the band with margin."""
        s = np.atleast_1d(self.s_eval(times))
        low = np.minimum(s - CONSTRAINT_MARGIN, 0.0)
        high = np.maximum(s - upper, 0.0)
        total = float(np.sum(low ** 2) + np.sum(high ** 2))
        return total

    def with_coefficients(self, coefficients) -> "BoundaryModel":
        return BoundaryModel(self.l, np.asarray(coefficients, dtype=float))
