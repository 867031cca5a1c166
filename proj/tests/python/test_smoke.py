"""Smoke tests for the python bindings."""

import math

import pytest

try:
    import nlstokes as nls
except ImportError:
    nls = pytest.importorskip("_nlstokes")


def test_version():
    assert nls.__version__


def test_normalization_constants():
    grad = nls.normalize(nls.RadialKernelProfile.constant(), 2, "gradient")
    assert grad.amplitude == pytest.approx(3.0 / math.pi, rel=1e-13)
    diff = nls.normalize(nls.RadialKernelProfile.constant(), 3, "diffusion")
    assert diff.amplitude == pytest.approx(15.0 / (2.0 * math.pi), rel=1e-13)
    assert nls.compute_moment(grad, 1, 2) == pytest.approx(2.0, rel=1e-12)


def test_symbol_windows():
    ks = nls.make_kernel_set(3, 0.1)
    table = nls.SymbolTable(ks)
    assert table.lambda_symbol(0.0) == 0.0
    lam = table.lambda_symbol(1.0)
    assert 0.9995 <= lam <= 1.0 + 1e-12
    b = table.b_symbol(1.0)
    assert 0.999 <= b <= 1.0 + 1e-12
    t = table.evaluate(4.0)
    assert t.saddle_term(ks.delta) > 0.0


def test_certify_bounds_small():
    ks = nls.make_kernel_set(2, 0.1)
    rep = nls.certify_bounds(ks, 8, [0.1], threads=2)
    assert rep["all_passed"]
    assert rep["failures"] == []


def test_single_mode_solve_matches_local():
    case = nls.make_case("single_mode_shear", 3)
    ks = nls.make_kernel_set(3, 0.05)
    sol = nls.solve(case.body_force, case.divergence_data, ks, "nonlocal", 4)
    scale = nls.sobolev_norm(case.velocity_exact, 0.0)
    err = nls.sobolev_norm(nls.subtract(case.velocity_exact, sol.velocity), 0.0)
    assert sol.residual_norm < 1e-10 * scale
    assert err < 1e-3 * scale  # O(delta^2) away from the local solution


def test_delta_sweep_second_order():
    case = nls.make_case("single_mode_shear", 2)
    ks = nls.make_kernel_set(2, 0.1)
    rep = nls.delta_sweep(case, ks, [0.2, 0.1, 0.05, 0.025], 4)
    fit = rep["fitted"]["u_l2"]
    assert 1.8 <= fit["slope"] <= 2.2
    assert fit["r_squared"] >= 0.98


def test_fit_rate_exact():
    fit = nls.fit_rate([(0.2, 0.04), (0.1, 0.01), (0.05, 0.0025)])
    assert fit["slope"] == pytest.approx(2.0, abs=1e-12)
    assert fit["r_squared"] == pytest.approx(1.0, abs=1e-12)


def test_field_roundtrip():
    f = nls.random_field(7, 3, 1.0, 2, 2)
    m = 2 * f.band + 2
    samples = nls.sample_on_grid(f, m)
    back = nls.grid_to_coeffs(samples, 2, 2, f.band, m)
    dev = nls.sobolev_norm(nls.subtract(f, back), 0.0)
    assert dev < 1e-12 * nls.sobolev_norm(f, 0.0)


def test_errors_are_typed():
    with pytest.raises(Exception):
        nls.make_kernel_set(4, 0.1)
    ks = nls.make_kernel_set(2, 0.1)
    table = nls.SymbolTable(ks)
    with pytest.raises(Exception):
        table.d_symbol(1.0)  # no mollifier present
