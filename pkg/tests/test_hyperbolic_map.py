import math

import numpy as np
import pytest

from greenlab.geometry import hyperbolic_distance
from greenlab.hyperbolic_map import (
    HyperbolicProfile,
    ball_to_hyperbolic,
    check_conformal_covariance,
    check_p2_equation,
    growth_coefficient,
    hyperbolic_to_ball,
    nonexistence_demo,
    p_k_hyperbolic,
    polar_distance,
)
from greenlab.radial_solver import SourceFn, shoot


@pytest.fixture(scope="module")
def critical_solution():
    return shoot(1.0, 0.5, SourceFn.power(7.0))


def test_transport_of_a_constant():
    sol = shoot(1.5, 0.0, SourceFn.zero())
    profile = ball_to_hyperbolic(sol)
    want = 1.5 * math.sqrt(2.0) * np.cosh(profile.rho_grid / 2.0)
    assert np.max(np.abs(profile.u - want)) <= 1e-9
    # u(0+) = sqrt(2) v(0)
    assert profile.u[0] == pytest.approx(1.5 * math.sqrt(2.0), rel=1e-6)


def test_round_trip_is_identity(critical_solution):
    profile = ball_to_hyperbolic(critical_solution)
    r, v = hyperbolic_to_ball(profile)
    spline = critical_solution.spline()
    mask = r <= 0.999
    assert np.max(np.abs(v[mask] - spline(r[mask]))) <= 1e-13


def test_growth_coefficient(critical_solution):
    # constant profile: u = sqrt(2) cosh(rho/2) has limit 1/sqrt(2)
    rho = np.logspace(-2, np.log10(12.0), 200)
    const_profile = HyperbolicProfile(
        rho_grid=rho, u=math.sqrt(2.0) * np.cosh(rho / 2.0), alpha_est=0.0
    )
    assert growth_coefficient(const_profile) == pytest.approx(
        1.0 / math.sqrt(2.0), abs=1e-9
    )

    profile = ball_to_hyperbolic(critical_solution)
    assert profile.alpha_est == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-3)

    sol2 = shoot(2.0, 0.5, SourceFn.power(7.0))
    assert ball_to_hyperbolic(sol2).alpha_est == pytest.approx(
        2.0 / math.sqrt(2.0), abs=1e-3
    )


def test_growth_coefficient_converges_in_rho_max(critical_solution):
    a1 = ball_to_hyperbolic(critical_solution, rho_max=6.0).alpha_est
    a2 = ball_to_hyperbolic(critical_solution, rho_max=12.0).alpha_est
    assert abs(a1 - a2) <= 1e-4


def test_growth_warns_on_short_tail():
    rho = np.linspace(0.5, 4.0, 50)
    prof = HyperbolicProfile(rho, np.exp(rho / 2.0), alpha_est=0.0)
    with pytest.warns(UserWarning, match="tail"):
        growth_coefficient(prof)


def test_polar_distance_matches_ball_metric():
    rng = np.random.default_rng(4)
    pts = rng.uniform(-1.0, 1.0, size=(40_000, 2, 3))
    ok = (np.linalg.norm(pts, axis=2) <= 0.99).all(axis=1)
    pts = pts[ok][:10_000]
    x, y = pts[:, 0], pts[:, 1]
    rho_x = hyperbolic_distance(x, np.zeros(3))
    rho_y = hyperbolic_distance(y, np.zeros(3))
    cos_t = np.sum(x * y, axis=1) / (
        np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1)
    )
    via_law = polar_distance(rho_x, rho_y, np.clip(cos_t, -1.0, 1.0))
    direct = hyperbolic_distance(x, y)
    assert np.max(np.abs(via_law - direct)) <= 1e-10


def test_conformal_covariance_dual_route():
    report = check_conformal_covariance()
    assert report.passed
    assert report.max_rel_err <= 1e-4
    # 4th-order convergence of both finite-difference routes
    assert 8.0 <= report.params["halving_ratio_min"]
    assert report.params["halving_ratio_max"] <= 40.0


def test_p1_of_constant_is_minus_three_quarters():
    const = lambda rho: np.ones_like(np.asarray(rho, dtype=float))
    val = float(p_k_hyperbolic(const, 1.0, 1))
    assert val == pytest.approx(-0.75, abs=1e-10)
    val2 = float(p_k_hyperbolic(const, 1.0, 2))
    assert val2 == pytest.approx(-15.0 / 16.0, abs=1e-9)


def test_p2_annihilates_the_transported_constant():
    cosh_half = lambda rho: np.cosh(np.asarray(rho, dtype=float) / 2.0)
    vals = p_k_hyperbolic(cosh_half, np.array([0.5, 1.0, 2.0]), 2)
    assert np.max(np.abs(vals)) <= 1e-7


def test_p2_equation_for_transported_solution(critical_solution):
    report = check_p2_equation(critical_solution)
    assert report.passed
    assert report.max_abs_err <= 1e-3


def test_p2_equation_negative_control():
    # a transported constant is not a solution; the residual is order one
    flat = shoot(1.0, 0.0, SourceFn.zero())
    report = check_p2_equation(flat)
    assert not report.passed
    assert report.max_abs_err > 1e-2


def test_p2_equation_fd_convergence_on_exact_profile():
    # the transported-constant family is annihilated exactly, which
    # isolates the finite-difference truncation; it contracts at 4th order
    cosh_half = lambda rho: np.cosh(np.asarray(rho, dtype=float) / 2.0)
    probes = np.linspace(0.5, 3.0, 8)
    res = {
        h: float(np.max(np.abs(p_k_hyperbolic(cosh_half, probes, 2, h))))
        for h in (0.16, 0.08)
    }
    ratio = res[0.16] / res[0.08]
    assert 10.0 <= ratio <= 25.0


def test_nonexistence_demo():
    report = nonexistence_demo(1.0)
    assert report.passed
    rows = report.params["table"]
    ts = [row["T"] for row in rows]
    # closed form at the origin probe: T(0) = alpha^-7 / 80
    assert ts[0] == pytest.approx(1.0 / 80.0, rel=1e-12)
    assert all(t2 < t1 for t1, t2 in zip(ts[:-1], ts[1:]))
    assert ts[-1] / ts[1] < math.exp(-4.0)
    # the trial profile keeps u e^(-rho/2) at alpha exactly
    assert report.params["growth_deviation"] <= 1e-12
    # u/T blows up by at least e^4 per probe step
    ratios = [row["u_over_T"] for row in rows]
    for r1, r2 in zip(ratios[:-1], ratios[1:]):
        assert r2 / r1 >= math.exp(4.0)


def test_nonexistence_alpha_scaling():
    # T scales like alpha^-7
    t1 = nonexistence_demo(1.0).params["table"][0]["T"]
    t2 = nonexistence_demo(2.0).params["table"][0]["T"]
    assert t2 == pytest.approx(t1 / 128.0, rel=1e-10)


def test_nonexistence_linear_kernel_control():
    # with the linear-growth kernel the image does not decay: the decay
    # is a property of the hyperbolic kernel, not of the construction
    report = nonexistence_demo(
        1.0, kernel=lambda rho: np.asarray(rho, dtype=float)
    )
    ts = [row["T"] for row in report.params["table"]]
    assert all(t2 > t1 for t1, t2 in zip(ts[:-1], ts[1:]))
    assert not report.passed
