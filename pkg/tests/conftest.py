import numpy as np
import pytest

import thpsolve as T


@pytest.fixture(scope="session")
def mesh01():
    return T.UniformMesh(0.0, 1.0, 2001)


@pytest.fixture(scope="session")
def table_q0(mesh01):
    """Formal powers for q = 0 on [0, 1]: phi_n = x^n."""
    f = T.solve_particular(T.SampledFunction.constant(mesh01, 0.0))
    return T.build_formal_powers(f, 12)


@pytest.fixture(scope="session")
def table_q1(mesh01):
    """Formal powers for q = 1 on [0, 1]: f = cosh, phi_1 = sinh."""
    f = T.solve_particular(T.SampledFunction.constant(mesh01, 1.0))
    return T.build_formal_powers(f, 12)


@pytest.fixture(scope="session")
def manufactured():
    """q = 0 problem with exact data from u = h0 + h2 = 1 + x^2 + 2t on the
    boundary s(t) = 1 + 0.5 t; the flux data on the moving boundary are
    supplied explicitly so the instance is exactly consistent."""
    spec = T.ProblemSpec(
        q=lambda x: 0.0, L=2.0, l=1.0, T=1.0,
        g1=lambda x: 1.0 + x * x,
        g2=lambda t: 0.0,
        g3=lambda t: 1.0 + (1.0 + 0.5 * t) ** 2 + 2.0 * t,
        flux_data=lambda t: 2.0 * (1.0 + 0.5 * t),
    )
    work = T.prepare(spec, mesh_points=501, degree=6)
    model = T.BoundaryModel(1.0, [0.5, 0.0])
    return work, model


@pytest.fixture(scope="session")
def benchmark_solution():
    """One full solve of the exact reference problem (shared by the
    acceptance checks); returns (benchmark, workspace, fit, elapsed)."""
    import time

    bench = T.exact_benchmark()
    t0 = time.time()
    work = T.prepare(bench.spec)
    fit = T.solve_free_boundary(work, T.OptimizerSettings(K=6))
    elapsed = time.time() - t0
    return bench, work, fit, elapsed
