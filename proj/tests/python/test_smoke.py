"""Smoke tests for the python bindings; the heavy verification lives in the
C++ unit and acceptance suites."""

import math

import pytest

fraclab = pytest.importorskip("fraclab")


def test_gamma_density_closed_form():
    assert fraclab.gamma_density(1.0, [0.0]) == pytest.approx(1.0 / math.sqrt(2 * math.pi))
    assert fraclab.gamma_density(1.0, [0.0, 0.0]) == pytest.approx(1.0 / (2 * math.pi))


def test_heat_kernel_mass_and_symmetry():
    assert fraclab.heat_kernel(10.0, 0.3, 0.8, "periodic") == pytest.approx(1.0, abs=1e-8)
    a = fraclab.heat_kernel(0.05, 0.2, 0.7, "neumann")
    b = fraclab.heat_kernel(0.05, 0.7, 0.2, "neumann")
    assert a == b


def test_fbm_brownian_case_is_cumsum():
    p = fraclab.sample_fbm(64, 1.0 / 64, 0.5, 1, seed=9)
    acc = 0.0
    for i in range(64):
        acc += p["increments"][i]
        assert p["values"][i + 1] == pytest.approx(acc, abs=0.0)


def test_fbm_variance_normalization():
    n, paths = 32, 800
    total = 0.0
    for s in range(paths):
        p = fraclab.sample_fbm(n, 1.0 / n, 0.25, 1, seed=fraclab.seed_fanout(3, s))
        total += p["values"][n] ** 2
    assert total / paths == pytest.approx(1.0, rel=0.15)


def test_metrics_roundtrip():
    assert fraclab.wasserstein1_1d([0.0] * 10, [2.0] * 10) == pytest.approx(2.0)
    assert fraclab.p_variation([0.0, 1.0, 0.0, 1.0, 0.0], 1.0) == pytest.approx(4.0)
    fit = fraclab.scaling_exponent([1.0, 2.0, 4.0], [1.0, 4.0, 16.0])
    assert fit["slope"] == pytest.approx(2.0)


def test_admissibility_frontier():
    assert fraclab.admissible_weak(-1.4, 0.25)
    assert not fraclab.admissible_weak(-1.5, 0.25)
    assert fraclab.admissible_strong_d1(-1.0, 0.25, False)
    assert fraclab.admissible_strong_d1(-1.4, 0.25, True)


def test_sew_additive_germ():
    rep = fraclab.sew(lambda s, t: math.sin(t) - math.sin(s), 0.0, 1.0, 6)
    assert rep["limit"] == pytest.approx(math.sin(1.0))
    assert rep["converged"]


def test_solve_euler_zero_drift():
    path = fraclab.solve_euler(0.5, "smooth:zero", 4, 0.25, 64, seed=5)
    assert all(abs(v) < 1e-15 for v in path["psi"])


def test_run_experiment_and_determinism():
    config = {"germ": "quadratic", "levels": 8, "seed": 11}
    a = fraclab.run_experiment("sewing-run", config)
    b = fraclab.run_experiment("sewing-run", config)
    assert a["passed"]
    assert a["json"] == b["json"]
    assert "sewing-run" in fraclab.list_suites()
