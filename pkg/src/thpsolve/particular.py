"""Nonvanishing particular solution of f'' - q(x) f = 0 with f(0) = 1.

The solution is built as a power series of iterated integrals: starting from
the seed (1 for the Neumann-normalized branch, x for the Dirichlet one) each
term is obtained by integrating against q and then against 1.  The series
converges factorially on a bounded interval, so a handful of terms at
tolerance 1e-14 suffices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NonvanishingError
from .numerics import Interpolant, SampledFunction, cumulative_integral, make_interpolant

__all__ = ["ParticularSolution", "solve_particular"]

# nodes with |f| below this trigger the complex-combination fallback
ZERO_THRESHOLD = 1e-10

DEFAULT_MAX_TERMS = 50
DEFAULT_TOLERANCE = 1e-14


@dataclass(frozen=True)
class ParticularSolution:
    """Zero-free solution of f'' = q f, normalized to f(0) = 1, together
    with its derivative and an interpolant of the potential."""

    f: SampledFunction
    f_prime: SampledFunction
    f_prime_at_0: complex
    q: SampledFunction

    @property
    def mesh(self):
        return self.f.mesh

    def interpolant(self) -> Interpolant:
        return make_interpolant(self.f)

    def prime_interpolant(self) -> Interpolant:
        return make_interpolant(self.f_prime)

    def q_interpolant(self) -> Interpolant:
        return make_interpolant(self.q)


def _series_solution(q: SampledFunction, seed: np.ndarray, max_terms: int,
                     tolerance: float) -> tuple[np.ndarray, np.ndarray]:
    """Sum of iterated double integrals starting from ``seed``.

    Returns (y, y') tabulated on the mesh of q.  Each iteration maps
    T -> integral of (integral of q*T), so T solves y'' = q y term by term.
    """
    mesh = q.mesh
    term = seed.astype(complex)
    total = term.copy()
    total_prime = np.zeros(mesh.n_points, dtype=complex)
    if len(seed) and seed[0] == 0.0:  # seed x has derivative 1
        total_prime += 1.0
    for _ in range(max_terms):
        inner = cumulative_integral(SampledFunction(mesh, q.values * term))
        term = cumulative_integral(inner).values
        total += term
        total_prime += inner.values
        term_norm = np.max(np.abs(term))
        if term_norm <= tolerance * max(np.max(np.abs(total)), 1.0):
            return total, total_prime
    raise ConvergenceError(
        f"iterated-integral series did not converge within {max_terms} terms "
        f"(last term sup-norm {term_norm:.3e})"
    )


def solve_particular(q: SampledFunction, max_terms: int = DEFAULT_MAX_TERMS,
                     tolerance: float = DEFAULT_TOLERANCE) -> ParticularSolution:
    """Construct a zero-free f with f(0) = 1 on the mesh of ``q``.

    The branch y1 (y1(0)=1, y1'(0)=0) is used directly when it has no node
    near zero.  Otherwise the combination y1 + i*y2 is returned; for real q
    its modulus is bounded away from zero because the Wronskian of the two
    branches equals one.
    """
    mesh = q.mesh
    ones = np.ones(mesh.n_points)
    y1, y1p = _series_solution(q, ones, max_terms, tolerance)
    if np.min(np.abs(y1)) > ZERO_THRESHOLD:
        return ParticularSolution(
            f=SampledFunction(mesh, y1),
            f_prime=SampledFunction(mesh, y1p),
            f_prime_at_0=complex(y1p[0]),
            q=q,
        )
    x_nodes = mesh.nodes - mesh.x_start
    y2, y2p = _series_solution(q, x_nodes, max_terms, tolerance)
    f = y1 + 1j * y2
    fp = y1p + 1j * y2p
    if np.min(np.abs(f)) <= ZERO_THRESHOLD:
        raise NonvanishingError(
            "y1 + i*y2 still vanishes on the mesh (complex potential?)"
        )
    return ParticularSolution(
        f=SampledFunction(mesh, f),
        f_prime=SampledFunction(mesh, fp),
        f_prime_at_0=complex(fp[0]),
        q=q,
    )
