"""Collocation of the boundary conditions into a linear least-squares
problem for the basis coefficients.

For a fixed boundary candidate the four condition blocks (initial data,
data at x = 0, Dirichlet data on the moving boundary, flux balance on the
moving boundary) stack into an overdetermined system B a ~ g, solved in the
minimum-norm least-squares sense.  The fit quality is summarized by the
value function F = I1^2 + I2^2 + I3^2 + I4^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .boundary import BoundaryModel
from .errors import ConfigurationError, DegenerateSystemError, DomainError
from .expr import Expression
from .formal_powers import FormalPowerTable
from .thp import heat_coeff

__all__ = [
    "ProblemSpec",
    "CollocationGrid",
    "LinearSystem",
    "FitResult",
    "row_B",
    "row_C",
    "rows_D_E",
    "assemble_system",
    "solve_linear",
    "value_function",
    "InnerSolver",
]

DEFAULT_RANK_TOL = 1e-12

ScalarFunc = Union[Expression, Callable[[float], complex]]
BoundaryData = Union[ScalarFunc, np.ndarray]


def _tabulate(fn: Optional[BoundaryData], points: np.ndarray, what: str) -> np.ndarray:
    """Evaluate a function-like problem datum on a point set; arrays are
    accepted only when their length matches the point set exactly."""
    if fn is None:
        raise ConfigurationError(f"{what} is required but missing")
    if isinstance(fn, np.ndarray):
        if fn.shape != points.shape:
            raise ConfigurationError(
                f"tabulated {what} has {fn.shape[0] if fn.ndim else 0} values, "
                f"expected {points.shape[0]} (one per collocation point)"
            )
        return fn.astype(complex)
    return np.asarray([fn(p) for p in points], dtype=complex)


@dataclass(frozen=True)
class ProblemSpec:
    """Full description of one free boundary problem instance.

    ``g1``/``g2`` may be None when the corresponding condition is absent.
    ``g3`` (Dirichlet data on the moving boundary) is mandatory, as is the
    flux condition; when ``flux_data`` is None the flux right-hand side is
    the melt-rate form -s'(t), otherwise the given data are used (linear
    generalization of the flux condition; also drives manufactured tests).
    """

    q: BoundaryData
    L: float
    l: float
    T: float
    gamma11: Optional[ScalarFunc] = None   # defaults: identity trace operator
    gamma12: Optional[ScalarFunc] = None
    gamma21: Optional[ScalarFunc] = None   # defaults: pure derivative at x=0
    gamma22: Optional[ScalarFunc] = None
    g1: Optional[BoundaryData] = None
    g2: Optional[BoundaryData] = None
    g3: Optional[BoundaryData] = None
    flux_data: Optional[BoundaryData] = None

    def __post_init__(self):
        if not (0 < self.l <= self.L):
            raise ConfigurationError(f"need 0 < l <= L, got l={self.l}, L={self.L}")
        if self.T <= 0:
            raise ConfigurationError(f"need T > 0, got T={self.T}")
        if self.g3 is None:
            raise ConfigurationError(
                "Dirichlet data g3 on the free boundary is required"
            )

    @property
    def has_initial(self) -> bool:
        return self.g1 is not None

    @property
    def has_lateral(self) -> bool:
        return self.g2 is not None

    def _gamma(self, name: str, default: float) -> ScalarFunc:
        fn = getattr(self, name)
        if fn is None:
            return lambda _v, _c=default: _c
        return fn


@dataclass(frozen=True)
class CollocationGrid:
    """Sample points: x on [0, l] for the initial condition, t on [0, T]
    for the three time-dependent conditions."""

    x: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        t = np.asarray(self.t, dtype=float)
        for arr, name in ((x, "x"), (t, "t")):
            if arr.ndim != 1 or len(arr) < 2 or np.any(np.diff(arr) <= 0):
                raise ConfigurationError(f"{name} grid must be strictly increasing")
        if x[0] != 0.0:
            raise ConfigurationError("x grid must start at 0")
        if t[0] != 0.0:
            raise ConfigurationError("t grid must start at 0")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", t)

    @classmethod
    def equidistant(cls, l: float, T: float, n_x: int = 100, n_t: int = 100):
        return cls(np.linspace(0.0, l, n_x + 1), np.linspace(0.0, T, n_t + 1))


@dataclass(frozen=True)
class LinearSystem:
    """Stacked collocation matrix and right-hand side, with named slices
    for the four condition blocks (absent blocks map to empty slices)."""

    matrix: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    blocks: dict = field(repr=False)


@dataclass(frozen=True)
class FitResult:
    """Outcome of one inner least-squares fit."""

    a: np.ndarray
    boundary: BoundaryModel
    F: float
    residual_norms: tuple    # (I1, I2, I3, I4); zero for absent blocks
    residual_maxima: tuple   # per-block max abs residual

    @property
    def b(self) -> np.ndarray:
        return self.boundary.coefficients


def row_B(n: int, x, table: FormalPowerTable, spec: ProblemSpec):
    """Initial-condition column entry: value of the traced basis function
    H_n at t = 0, where only the k = 0 term survives."""
    g11 = spec._gamma("gamma11", 1.0)
    g12 = spec._gamma("gamma12", 0.0)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    v11 = np.asarray([g11(p) for p in xs], dtype=complex)
    v12 = np.asarray([g12(p) for p in xs], dtype=complex)
    out = v11 * table.phi_eval(n, xs) + v12 * table.phi_prime_eval(n, xs)
    return out if np.ndim(x) else complex(out[0])


def row_C(n: int, t, table: FormalPowerTable, spec: ProblemSpec):
    """x = 0 condition column entry.  Only phi_0(0) = 1, phi_0'(0) = f'(0)
    and phi_1'(0) = 1 are nonzero at the origin, which collapses H_n to a
    single power of t."""
    g21 = spec._gamma("gamma21", 0.0)
    g22 = spec._gamma("gamma22", 1.0)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    v21 = np.asarray([g21(p) for p in ts], dtype=complex)
    v22 = np.asarray([g22(p) for p in ts], dtype=complex)
    if n % 2:
        k = (n - 1) // 2
        out = v22 * heat_coeff(n, k) * ts ** k
    else:
        k = n // 2
        out = (v21 + v22 * table.f.f_prime_at_0) * heat_coeff(n, k) * ts ** k
    return out if np.ndim(t) else complex(out[0])


def rows_D_E(n: int, t, s_val, table: FormalPowerTable):
    """Moving-boundary column entries: H_n and its x-derivative evaluated
    at x = s(t)."""
    s_arr = np.atleast_1d(np.asarray(s_val, dtype=float))
    if np.any(s_arr <= 0) or np.any(s_arr > table.mesh.x_end * (1 + 1e-12)):
        raise DomainError(
            f"boundary value outside (0, {table.mesh.x_end}]"
        )
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    d = np.zeros(ts.shape, dtype=complex)
    e = np.zeros(ts.shape, dtype=complex)
    tk = np.ones(ts.shape)
    for k in range(n // 2 + 1):
        c = heat_coeff(n, k)
        d += c * table.phi_eval(n - 2 * k, s_arr) * tk
        e += c * table.phi_prime_eval(n - 2 * k, s_arr) * tk
        tk = tk * ts
    if np.ndim(t):
        return d, e
    return complex(d[0]), complex(e[0])


class InnerSolver:
    """Caches the boundary-independent blocks and solves the inner linear
    least-squares problem for each boundary candidate."""

    def __init__(self, spec: ProblemSpec, grid: CollocationGrid,
                 table: FormalPowerTable, rank_tol: float = DEFAULT_RANK_TOL):
        if spec.l > table.mesh.x_end:
            raise ConfigurationError("initial boundary l lies outside the mesh")
        if abs(grid.x[-1] - spec.l) > 1e-12 * max(1.0, spec.l):
            raise ConfigurationError("x grid must end at the initial boundary l")
        if abs(grid.t[-1] - spec.T) > 1e-12 * max(1.0, spec.T):
            raise ConfigurationError("t grid must end at the final time T")
        self.spec = spec
        self.grid = grid
        self.table = table
        self.rank_tol = rank_tol
        ncols = table.degree + 1

        self._b_block = None
        self._g1 = None
        if spec.has_initial:
            self._b_block = np.column_stack(
                [row_B(n, grid.x, table, spec) for n in range(ncols)])
            self._g1 = _tabulate(spec.g1, grid.x, "g1")
        self._c_block = None
        self._g2 = None
        if spec.has_lateral:
            self._c_block = np.column_stack(
                [row_C(n, grid.t, table, spec) for n in range(ncols)])
            self._g2 = _tabulate(spec.g2, grid.t, "g2")
        self._g3 = _tabulate(spec.g3, grid.t, "g3")
        self._g4 = (None if spec.flux_data is None
                    else _tabulate(spec.flux_data, grid.t, "flux data"))
        # phi_m(s(t)) is the only boundary-dependent quantity; cache the
        # combinatorial structure for the D/E assembly
        self._coeff = [[heat_coeff(n, k) for k in range(n // 2 + 1)]
                       for n in range(ncols)]

    def _de_blocks(self, s_vals: np.ndarray):
        table = self.table
        ncols = table.degree + 1
        phi_s = np.stack([table.phi_eval(m, s_vals) for m in range(ncols)])
        phi_p_s = np.stack([table.phi_prime_eval(m, s_vals) for m in range(ncols)])
        t = self.grid.t
        d = np.zeros((len(t), ncols), dtype=complex)
        e = np.zeros((len(t), ncols), dtype=complex)
        for n in range(ncols):
            tk = np.ones(len(t))
            for k, c in enumerate(self._coeff[n]):
                d[:, n] += c * phi_s[n - 2 * k] * tk
                e[:, n] += c * phi_p_s[n - 2 * k] * tk
                tk = tk * t
        return d, e

    def system_for(self, model: BoundaryModel, clamp: bool = False) -> LinearSystem:
        s_vals = np.atleast_1d(model.s_eval(self.grid.t))
        if clamp:
            s_vals = np.clip(s_vals, 1e-8, self.spec.L)
        elif model.constraint_violation(self.grid.t, self.spec.L) > 0:
            raise ConfigurationError(
                "boundary candidate violates 0 < s(t) <= L on the grid"
            )
        d_block, e_block = self._de_blocks(s_vals)
        flux_rhs = (-model.s_dot_eval(self.grid.t) if self._g4 is None
                    else self._g4)
        mats, rhss, blocks = [], [], {}
        row = 0

        def push(name, mat, rhs):
            nonlocal row
            if mat is None:
                blocks[name] = slice(row, row)
                return
            mats.append(mat)
            rhss.append(np.asarray(rhs, dtype=complex))
            blocks[name] = slice(row, row + mat.shape[0])
            row += mat.shape[0]

        push("initial", self._b_block, self._g1)
        push("lateral", self._c_block, self._g2)
        push("dirichlet", d_block, self._g3)
        push("flux", e_block, flux_rhs)
        return LinearSystem(np.vstack(mats), np.concatenate(rhss), blocks)

    def fit(self, model: BoundaryModel, a=None, clamp: bool = False) -> FitResult:
        system = self.system_for(model, clamp=clamp)
        if a is None:
            a = solve_linear(system, self.rank_tol)
        a = np.asarray(a, dtype=complex)
        residual = system.matrix @ a - system.rhs
        norms, maxima = [], []
        for name in ("initial", "lateral", "dirichlet", "flux"):
            block = residual[system.blocks[name]]
            norms.append(float(np.linalg.norm(block)) if block.size else 0.0)
            maxima.append(float(np.max(np.abs(block))) if block.size else 0.0)
        value = float(sum(v * v for v in norms))
        return FitResult(a=a, boundary=model, F=value,
                         residual_norms=tuple(norms),
                         residual_maxima=tuple(maxima))


def assemble_system(spec: ProblemSpec, grid: CollocationGrid,
                    table: FormalPowerTable, model: BoundaryModel) -> LinearSystem:
    """Stack the collocation blocks for one boundary candidate."""
    return InnerSolver(spec, grid, table).system_for(model)


def solve_linear(system: LinearSystem, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Minimum-norm least-squares solution via SVD; singular values below
    rank_tol * sigma_max are treated as zero."""
    if not np.any(system.matrix):
        raise DegenerateSystemError("collocation matrix is identically zero")
    a, *_ = np.linalg.lstsq(system.matrix, system.rhs, rcond=rank_tol)
    return a


def value_function(spec: ProblemSpec, grid: CollocationGrid,
                   table: FormalPowerTable, model: BoundaryModel,
                   a=None) -> FitResult:
    """Residual summary for one boundary candidate; when ``a`` is omitted
    the inner least-squares problem is solved first."""
    return InnerSolver(spec, grid, table).fit(model, a=a)
