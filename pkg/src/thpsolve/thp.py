"""Classical heat polynomials and their transmuted counterparts.

h_n(x,t) = sum_k c_k^n x^(n-2k) t^k solves the heat equation; replacing the
monomials x^m by the formal powers phi_m yields functions H_n solving
u_xx - q(x) u = u_t with the same t-structure.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError, DomainError
from .formal_powers import FormalPowerTable

__all__ = ["heat_coeff", "heat_poly", "thp_eval", "thp_x_deriv",
           "solution_eval", "solution_x_deriv", "pde_residual"]

MAX_DEGREE = 20  # c_k^n fits comfortably in an int64 up to here


def heat_coeff(n: int, k: int) -> int:
    """Exact coefficient n! / ((n-2k)! k!)."""
    if n > MAX_DEGREE:
        raise ConfigurationError(f"degree {n} exceeds supported maximum {MAX_DEGREE}")
    if n < 0 or k < 0 or 2 * k > n:
        raise DomainError(f"coefficient undefined for n={n}, k={k}")
    return math.factorial(n) // (math.factorial(n - 2 * k) * math.factorial(k))


def heat_poly(n: int, x: float, t: float) -> float:
    """Classical heat polynomial h_n(x, t)."""
    total = 0.0
    tk = 1.0
    for k in range(n // 2 + 1):
        total += heat_coeff(n, k) * x ** (n - 2 * k) * tk
        tk *= t
    return total


def thp_eval(table: FormalPowerTable, n: int, x, t):
    """H_n(x, t) = sum_k c_k^n phi_(n-2k)(x) t^k."""
    total = 0.0 + 0.0j
    tk = 1.0
    for k in range(n // 2 + 1):
        total = total + heat_coeff(n, k) * table.phi_eval(n - 2 * k, x) * tk
        tk = tk * t
    return total


def thp_x_deriv(table: FormalPowerTable, n: int, x, t):
    """x-derivative of H_n, using the closed-form phi' interpolants."""
    total = 0.0 + 0.0j
    tk = 1.0
    for k in range(n // 2 + 1):
        total = total + heat_coeff(n, k) * table.phi_prime_eval(n - 2 * k, x) * tk
        tk = tk * t
    return total


def solution_eval(table: FormalPowerTable, coeffs, x, t):
    """u_N(x, t) = sum_n a_n H_n(x, t) for a coefficient vector a."""
    total = 0.0 + 0.0j
    for n, a in enumerate(coeffs):
        if a != 0:
            total = total + a * thp_eval(table, n, x, t)
    return total


def solution_x_deriv(table: FormalPowerTable, coeffs, x, t):
    total = 0.0 + 0.0j
    for n, a in enumerate(coeffs):
        if a != 0:
            total = total + a * thp_x_deriv(table, n, x, t)
    return total


def pde_residual(table: FormalPowerTable, coeffs, sample_points,
                 fd_step: float = 1e-4) -> float:
    """Max of |u_xx - q u - u_t| over interior sample points.

    Derivatives are central finite differences of step ``fd_step``; the
    second x-derivative differences the closed-form u_x (a second
    difference of the value splines alone would be dominated by their
    curvature error for the higher-degree basis functions)."""
    q = table.f.q_interpolant()
    # in t the basis is an exact polynomial, so a finer step costs nothing
    # in rounding noise and cuts the truncation error of the t-difference
    t_step = fd_step / 10.0
    worst = 0.0
    for x, t in sample_points:
        u = solution_eval(table, coeffs, x, t)
        u_xx = (solution_x_deriv(table, coeffs, x + fd_step, t)
                - solution_x_deriv(table, coeffs, x - fd_step, t)) / (2 * fd_step)
        u_t = (solution_eval(table, coeffs, x, t + t_step)
               - solution_eval(table, coeffs, x, t - t_step)) / (2 * t_step)
        worst = max(worst, abs(u_xx - q(x) * u - u_t))
    return worst
