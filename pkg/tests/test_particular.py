import math

import numpy as np
import pytest

from thpsolve import (ConvergenceError, SampledFunction, UniformMesh,
                      make_interpolant, solve_particular)
from thpsolve.particular import _series_solution


def rk4_second_order(q, x_end, h):
    """Independent oracle: classical RK4 for y'' = q(x) y, y(0)=1, y'(0)=0."""
    y, yp, x = 1.0, 0.0, 0.0
    n = round(x_end / h)
    for _ in range(n):
        k1y, k1p = yp, q(x) * y
        k2y, k2p = yp + 0.5 * h * k1p, q(x + 0.5 * h) * (y + 0.5 * h * k1y)
        k3y, k3p = yp + 0.5 * h * k2p, q(x + 0.5 * h) * (y + 0.5 * h * k2y)
        k4y, k4p = yp + h * k3p, q(x + h) * (y + h * k3y)
        y += h * (k1y + 2 * k2y + 2 * k3y + k4y) / 6.0
        yp += h * (k1p + 2 * k2p + 2 * k3p + k4p) / 6.0
        x += h
    return y


def test_zero_potential():
    m = UniformMesh(0.0, 1.0, 101)
    sol = solve_particular(SampledFunction.constant(m, 0.0))
    assert np.allclose(sol.f.values, 1.0)
    assert sol.f_prime_at_0 == 0.0


def test_unit_potential_is_cosh():
    m = UniformMesh(0.0, 1.0, 2001)
    sol = solve_particular(SampledFunction.constant(m, 1.0))
    assert abs(sol.f.values[-1] - 1.5430806348) < 1e-8
    assert np.max(np.abs(sol.f.values - np.cosh(m.nodes))) < 1e-10
    assert np.max(np.abs(sol.f_prime.values - np.sinh(m.nodes))) < 1e-10


def test_quadratic_potential_vs_rk4():
    m = UniformMesh(0.0, 1.5, 2001)
    sol = solve_particular(SampledFunction(m, m.nodes ** 2 + 0j))
    assert sol.f.values[0] == 1.0
    assert abs(sol.f_prime_at_0) == 0.0
    oracle = rk4_second_order(lambda x: x * x, 1.0, 1e-5)
    at_one = sol.interpolant()(1.0)
    assert abs(at_one - oracle) < 1e-7


def test_residual_invariant():
    m = UniformMesh(0.0, 1.5, 2001)
    q = SampledFunction(m, m.nodes ** 2 + 0j)
    sol = solve_particular(q)
    fpp = make_interpolant(sol.f_prime).derivative(m.nodes)
    resid = np.max(np.abs(fpp - q.values * sol.f.values))
    assert resid <= 1e-6 * (1.0 + np.max(np.abs(sol.f.values)))


def test_normalization_matches_spline_derivative():
    m = UniformMesh(0.0, 1.0, 2001)
    sol = solve_particular(SampledFunction(m, np.sin(3 * m.nodes) + 0j))
    assert sol.f.values[0] == 1.0
    spline_deriv = make_interpolant(sol.f).derivative(0.0)
    assert abs(spline_deriv - sol.f_prime_at_0) < 1e-8


def test_wronskian_of_both_branches():
    m = UniformMesh(0.0, 1.0, 2001)
    q = SampledFunction(m, m.nodes ** 2 + 0j)
    y1, y1p = _series_solution(q, np.ones(m.n_points), 50, 1e-14)
    y2, y2p = _series_solution(q, m.nodes, 50, 1e-14)
    wronskian = y1 * y2p - y1p * y2
    assert np.max(np.abs(wronskian - 1.0)) < 1e-6


def test_nonconvergence_reported():
    m = UniformMesh(0.0, 1.0, 101)
    with pytest.raises(ConvergenceError):
        solve_particular(SampledFunction.constant(m, 40.0), max_terms=2)


def test_complex_fallback_when_f_vanishes():
    # q = -(pi/2)^2: y1 = cos(pi x / 2) vanishes at the last node x = 1, so
    # the complex combination y1 + i y2 must be returned instead
    m = UniformMesh(0.0, 1.0, 2001)
    w = math.pi / 2
    sol = solve_particular(SampledFunction.constant(m, -w * w))
    assert np.min(np.abs(sol.f.values)) > 0.6
    expected = np.cos(w * m.nodes) + 1j * np.sin(w * m.nodes) / w
    assert np.max(np.abs(sol.f.values - expected)) < 1e-10
    assert abs(sol.f_prime_at_0 - 1j) < 1e-12
