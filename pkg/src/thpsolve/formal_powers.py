"""Formal powers phi_0..phi_N generated from a zero-free solution f.

Two interleaved sequences of recursive integrals against f^2 and f^-2
produce functions phi_n that play the role of x^n for the perturbed
operator d^2/dx^2 - q(x).  Their first derivatives come out in closed form
from the same recursion, so no numerical differentiation is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .numerics import Interpolant, SampledFunction, cumulative_integral, make_interpolant
from .particular import ParticularSolution, ZERO_THRESHOLD

__all__ = ["FormalPowerTable", "build_formal_powers"]


@dataclass(frozen=True)
class FormalPowerTable:
    """Interpolants of phi_0..phi_N and their derivatives."""

    degree: int
    phi: tuple[Interpolant, ...] = field(repr=False)
    phi_prime: tuple[Interpolant, ...] = field(repr=False)
    phi_values: np.ndarray = field(repr=False)    # (N+1, n_points) node values
    f: ParticularSolution = field(repr=False)

    @property
    def mesh(self):
        return self.f.mesh

    def _check_n(self, n: int):
        if not 0 <= n <= self.degree:
            raise DomainError(f"formal power index {n} outside 0..{self.degree}")

    def phi_eval(self, n: int, x):
        self._check_n(n)
        return self.phi[n](x)

    def phi_prime_eval(self, n: int, x):
        self._check_n(n)
        return self.phi_prime[n](x)


def build_formal_powers(f: ParticularSolution, degree: int) -> FormalPowerTable:
    """Run the recursive-integral construction up to index ``degree``."""
    if degree < 0:
        raise ConfigurationError("degree must be nonnegative")
    mesh = f.mesh
    fv = f.f.values
    fpv = f.f_prime.values
    if np.min(np.abs(fv)) <= ZERO_THRESHOLD:
        raise ConfigurationError("f vanishes on the mesh; recursion would divide by zero")
    f2 = fv * fv
    inv_f2 = 1.0 / f2

    ones = np.ones(mesh.n_points, dtype=complex)
    big_x = [ones]          # X^(n): weight 1/f^2 for odd n, f^2 for even n
    big_xt = [ones]         # X~(n): weight f^2 for odd n, 1/f^2 for even n
    for n in range(1, degree + 1):
        w = inv_f2 if n % 2 else f2
        big_x.append(n * cumulative_integral(SampledFunction(mesh, big_x[-1] * w)).values)
        wt = f2 if n % 2 else inv_f2
        big_xt.append(n * cumulative_integral(SampledFunction(mesh, big_xt[-1] * wt)).values)

    phi_vals = np.empty((degree + 1, mesh.n_points), dtype=complex)
    phi_prime_vals = np.empty_like(phi_vals)
    phi_vals[0] = fv
    phi_prime_vals[0] = fpv
    for n in range(1, degree + 1):
        chain = big_x if n % 2 else big_xt
        phi_vals[n] = fv * chain[n]
        phi_prime_vals[n] = fpv * chain[n] + n * chain[n - 1] / fv

    phi = tuple(make_interpolant(SampledFunction(mesh, phi_vals[n]))
                for n in range(degree + 1))
    phi_prime = tuple(make_interpolant(SampledFunction(mesh, phi_prime_vals[n]))
                      for n in range(degree + 1))
    return FormalPowerTable(degree=degree, phi=phi, phi_prime=phi_prime,
                            phi_values=phi_vals, f=f)
