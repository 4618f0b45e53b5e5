import numpy as np
import pytest

from thpsolve.cli import main

GOOD_CONFIG = """\
# manufactured problem with a known polynomial solution
q = 0
l = 1.0
l_domain = 2.0
t_final = 1.0
g1 = 1 + x^2
g2 = 0
g3 = 1 + (1 + 0.5*t)^2 + 2*t
flux = 2*(1 + 0.5*t)
mesh_points = 501
n = 6
k = 2
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "problem.cfg"
    path.write_text(GOOD_CONFIG)
    return str(path)


def test_solve_writes_outputs(config_path, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["solve", config_path, "--out", str(out)]) == 0
    rows = (out / "boundary.csv").read_text().splitlines()
    assert rows[0] == "t,s"
    assert len(rows) == 1 + 101
    assert (out / "coefficients.txt").exists()
    assert (out / "residuals.txt").exists()
    assert (out / "solution.csv").exists()


def test_outputs_deterministic(config_path, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["solve", config_path, "--out", str(out1)]) == 0
    assert main(["solve", config_path, "--out", str(out2)]) == 0
    for name in ("boundary.csv", "coefficients.txt", "residuals.txt",
                 "solution.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_coefficients_format(config_path, tmp_path):
    out = tmp_path / "out"
    main(["solve", config_path, "--out", str(out)])
    text = (out / "coefficients.txt").read_text()
    assert "b_1 = 0.50000000" in text


def test_seed_boundary_override(config_path, tmp_path):
    out = tmp_path / "out"
    code = main(["solve", config_path, "--out", str(out),
                 "--seed-boundary", "1 + 0.3*t"])
    assert code == 0


def test_seed_boundary_must_match_anchor(config_path, tmp_path):
    code = main(["solve", config_path, "--out", str(tmp_path / "out"),
                 "--seed-boundary", "2 + 0.3*t"])
    assert code == 2


def test_config_invariant_violation(tmp_path, capsys):
    bad = GOOD_CONFIG.replace("l_domain = 2.0", "l_domain = 0.5")
    path = tmp_path / "bad.cfg"
    path.write_text(bad)
    assert main(["solve", str(path), "--out", str(tmp_path / "o")]) == 2
    assert "l <= L" in capsys.readouterr().err


def test_config_missing_dirichlet_data(tmp_path):
    lines = [ln for ln in GOOD_CONFIG.splitlines() if not ln.startswith("g3")]
    path = tmp_path / "bad.cfg"
    path.write_text("\n".join(lines))
    assert main(["solve", str(path), "--out", str(tmp_path / "o")]) == 2


def test_config_stefan_cannot_be_disabled(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text(GOOD_CONFIG + "stefan = off\n")
    assert main(["solve", str(path), "--out", str(tmp_path / "o")]) == 2


def test_config_syntax_error_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("q = 0\nl === 1\n")
    assert main(["solve", str(path), "--out", str(tmp_path / "o")]) == 2
    assert ":2:" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["solve", str(tmp_path / "nope.cfg"),
                 "--out", str(tmp_path / "o")]) == 2


def test_g3_file_path(tmp_path):
    times = np.linspace(0.0, 1.0, 101)
    values = 1.0 + (1.0 + 0.5 * times) ** 2 + 2.0 * times
    data = tmp_path / "g3.csv"
    np.savetxt(data, np.column_stack([times, values]), delimiter=",")
    cfg = "\n".join(ln for ln in GOOD_CONFIG.splitlines()
                    if not ln.startswith("g3"))
    cfg += f"\ng3_file = {data}\n"
    path = tmp_path / "problem.cfg"
    path.write_text(cfg)
    assert main(["solve", str(path), "--out", str(tmp_path / "out")]) == 0


def test_basis_dump_monomials(config_path, tmp_path):
    out = tmp_path / "out"
    assert main(["basis-dump", config_path, "--n", "3",
                 "--out", str(out)]) == 0
    data = np.loadtxt(out / "phi.csv", delimiter=",", skiprows=1)
    x = data[:, 0]
    for n in range(4):
        assert np.max(np.abs(data[:, 1 + n] - x ** n)) < 1e-10
        assert np.max(np.abs(data[:, 5 + n])) < 1e-12  # imaginary parts


def test_basis_dump_index_guard(config_path, tmp_path):
    assert main(["basis-dump", config_path, "--n", "7",
                 "--out", str(tmp_path / "out")]) == 2


def test_verbose_trace(config_path, tmp_path, capsys):
    assert main(["solve", config_path, "--out", str(tmp_path / "out"),
                 "--verbose"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("stage,iteration,objective,b_1")
    assert len(lines) > 10
