import numpy as np
import pytest

from greenlab.ball_kernel import boggio_g
from greenlab.geometry import PlaneReflector
from greenlab.moving_plane import (
    audit_g_compare,
    audit_g_sign,
    check_boundary_x1_derivative,
    check_monotone_radial,
    _sample_cap,
    _sample_plane_disk,
)
from greenlab.radial_solver import SourceFn, shoot


def test_g_sign_audit_clean():
    report = audit_g_sign(0.5, 100_000, seed=42)
    assert report.passed
    assert report.params["violations"] == 0
    small = audit_g_sign(0.9, 10_000, seed=42)
    assert small.passed


def test_g_sign_at_zero_plane():
    # reflection symmetry makes the pair sum vanish identically at lam = 0
    report = audit_g_sign(0.0, 50_000, seed=42)
    assert report.passed
    assert report.params["equality_cases"] == 50_000
    assert abs(report.params["worst_value"]) <= 1e-12


def test_g_compare_audit_clean():
    report = audit_g_compare(0.5, 100_000, seed=7)
    assert report.passed
    assert report.params["violations"] == 0
    assert report.params["worst_first"] > -1e-14
    report2 = audit_g_compare(0.2, 100_000, seed=7)
    assert report2.passed


def test_compare_with_reflections_outside_the_ball():
    # when ybar exits the ball the first inequality is plain positivity
    refl = PlaneReflector(0.6)
    x = np.array([0.1, 0.0, 0.0])
    y = np.array([0.55, 0.55, 0.55])
    ybar = refl.reflect(y)
    assert np.linalg.norm(ybar) > 1.0
    assert boggio_g(x, y) > 0.0


def test_audits_are_seed_deterministic():
    a = audit_g_sign(0.3, 20_000, seed=123)
    b = audit_g_sign(0.3, 20_000, seed=123)
    assert a == b
    c = audit_g_compare(0.3, 20_000, seed=123)
    d = audit_g_compare(0.3, 20_000, seed=123)
    assert c.params["worst_first"] == d.params["worst_first"]


def test_analytic_gradient_agrees_with_fd_on_violation_sets():
    # both gradient routes must flag the same (empty) violation sets
    rng = np.random.default_rng(77)
    lam = 0.4
    xs = _sample_plane_disk(rng, lam, 1000)
    ys = _sample_cap(rng, lam, 1000)
    keep = np.linalg.norm(xs - ys, axis=1) > 0.05
    xs, ys = xs[keep], ys[keep]
    from greenlab.ball_kernel import grad_x_g

    g_analytic = grad_x_g(xs, ys)[:, 0]
    h = 1e-5
    e1 = np.array([1.0, 0.0, 0.0])
    g_fd = (boggio_g(xs + h * e1, ys) - boggio_g(xs - h * e1, ys)) / (2 * h)
    assert np.array_equal(g_analytic > 1e-14, g_fd > 1e-14)
    assert np.max(np.abs(g_analytic - g_fd)) <= 1e-9


def test_monotone_radial():
    sol = shoot(1.0, 0.5, SourceFn.power(7.0))
    report = check_monotone_radial(sol)
    assert report.passed
    assert report.params["min_increment"] > 0.0

    parab = shoot(1.0, 0.5, SourceFn.zero())
    assert check_monotone_radial(parab).passed

    # the flat profile is the degenerate boundary case: strictness fails
    flat = shoot(1.0, 0.0, SourceFn.zero())
    report_flat = check_monotone_radial(flat)
    assert not report_flat.passed


def test_boundary_x1_derivative():
    sol = shoot(1.0, 0.5, SourceFn.power(7.0))
    report = check_boundary_x1_derivative(sol)
    assert report.passed
    assert report.params["violations"] == 0
    # a radial function has vanishing x1-derivative on the plane x1 = 0
    dv = sol.dv_spline()
    x = np.array([0.0, 0.3, 0.2])
    r = np.linalg.norm(x)
    assert dv(r) * x[0] / r == 0.0


def test_full_lambda_sweep():
    for lam in np.arange(0.1, 0.95, 0.1):
        assert audit_g_sign(float(lam), 20_000, seed=42).passed
        assert audit_g_compare(float(lam), 20_000, seed=7).passed
