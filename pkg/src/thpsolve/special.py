"""Exponential integral Ei, its inverse, and the exact reference problem.

The reference free boundary problem uses q(x) = x^2 on [0, 1] x [0, 1]; it
has the closed-form solution u(x, t) = exp(-x^2/2 - t) with the moving
boundary s(t) = sqrt(2 * Ei^{-1}(2C - 2 e^{-t})), C = Ei(1/2)/2 + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .assemble import ProblemSpec
from .errors import DomainError

__all__ = ["ei", "ei_inv", "ExactBenchmark", "exact_benchmark",
           "BENCHMARK_L", "EI_INV_BRACKET"]

EULER_GAMMA = 0.5772156649015328606

# mesh interval for the reference problem; s(t) stays below ~1.37 on [0, 1]
BENCHMARK_L = 1.5
EI_INV_BRACKET = (0.05, 1.5)


def ei(x: float) -> float:
    """Exponential integral on the positive axis, by the ascending series
    Ei(x) = gamma + ln x + sum_k x^k / (k * k!)."""
    if x <= 0:
        raise DomainError(f"Ei requires x > 0, got {x}")
    total = EULER_GAMMA + math.log(x)
    term = 1.0
    for k in range(1, 1000):
        term *= x / k
        contribution = term / k
        total += contribution
        if abs(contribution) < 1e-16 * abs(total):
            break
    return total


def ei_inv(y: float, bracket: tuple = EI_INV_BRACKET) -> float:
    """Inverse of Ei on a bracket where it is strictly increasing
    (bisection to get close, Newton steps with Ei'(x) = e^x / x to finish)."""
    lo, hi = bracket
    flo, fhi = ei(lo), ei(hi)
    if not flo <= y <= fhi:
        raise DomainError(
            f"target {y} outside [Ei({lo}), Ei({hi})] = [{flo:.6g}, {fhi:.6g}]"
        )
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ei(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6:
            break
    x = 0.5 * (lo + hi)
    for _ in range(30):
        r = ei(x) - y
        if abs(r) <= 1e-13:
            break
        x -= r * x / math.exp(x)
        x = min(max(x, bracket[0]), bracket[1])
    if abs(ei(x) - y) > 1e-12:
        raise DomainError(f"Ei inversion did not reach tolerance at y={y}")
    return x


@dataclass(frozen=True)
class ExactBenchmark:
    """Reference problem instance plus its closed-form solution pair."""

    spec: ProblemSpec
    C: float
    exact_u: Callable[[float, float], float]
    exact_s: Callable[[float], float]


def exact_benchmark(times: np.ndarray | None = None) -> ExactBenchmark:
    """Reference problem with q = x^2, Dirichlet data on the moving
    boundary tabulated at the given collocation times (101 equispaced
    points on [0, 1] by default)."""
    if times is None:
        times = np.linspace(0.0, 1.0, 101)
    times = np.asarray(times, dtype=float)
    C = 0.5 * ei(0.5) + 1.0

    def exact_s(t: float) -> float:
        return math.sqrt(2.0 * ei_inv(2.0 * C - 2.0 * math.exp(-t)))

    def exact_u(x: float, t: float) -> float:
        return math.exp(-0.5 * x * x - t)

    g3_values = np.asarray([exact_u(exact_s(t), t) for t in times])
    spec = ProblemSpec(
        q=lambda x: x * x,
        L=BENCHMARK_L,
        l=1.0,
        T=1.0,
        gamma11=lambda x: 1.0,
        gamma12=lambda x: 0.0,
        gamma21=lambda t: 0.0,
        gamma22=lambda t: 1.0,
        g1=lambda x: math.exp(-0.5 * x * x),
        g2=lambda t: 0.0,
        g3=g3_values,
    )
    return ExactBenchmark(spec=spec, C=C, exact_u=exact_u, exact_s=exact_s)
