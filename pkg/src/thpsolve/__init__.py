"""Free boundary solver for u_xx - q(x) u = u_t built on a transmuted
heat-polynomial basis."""

from .assemble import (CollocationGrid, FitResult, InnerSolver, LinearSystem,
                       ProblemSpec, assemble_system, row_B, row_C, rows_D_E,
                       solve_linear, value_function)
from .boundary import BoundaryModel
from .errors import (ConfigurationError, ConvergenceError, DegenerateSystemError,
                     DomainError, ExpressionEvalError, ExpressionSyntaxError,
                     NonvanishingError, OptimizationError, SolverError)
from .expr import Expression, parse
from .formal_powers import FormalPowerTable, build_formal_powers
from .numerics import (Interpolant, SampledFunction, UniformMesh,
                       cumulative_integral, make_interpolant)
from .optimize import OptimizerSettings, minimize_boundary
from .particular import ParticularSolution, solve_particular
from .pipeline import Workspace, prepare, refit, solve_free_boundary
from .special import ExactBenchmark, ei, ei_inv, exact_benchmark
from .thp import (heat_coeff, heat_poly, pde_residual, solution_eval,
                  solution_x_deriv, thp_eval, thp_x_deriv)

__version__ = "0.1.0"
