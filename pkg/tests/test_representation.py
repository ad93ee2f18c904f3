import math

import numpy as np
import pytest

from greenlab.radial_solver import SourceFn, shoot
from greenlab.representation import (
    ball_rule,
    check_representation,
    oracle_constants,
    paper_constants,
    representation_rhs,
)

RULE = ball_rule()


def test_zero_source_is_exact():
    sol = shoot(1.0, 0.5, SourceFn.zero())
    report = check_representation(sol, oracle_constants(1.0, 0.5), RULE, tol=1e-10)
    assert report.passed
    assert report.max_abs_err <= 1e-10


def test_zero_source_grid_of_boundary_data():
    for a in np.linspace(0.5, 2.0, 6)[1:]:
        for b in np.linspace(0.0, 1.0, 5):
            sol = shoot(float(a), float(b), SourceFn.zero())
            report = check_representation(sol, rule=RULE, tol=1e-10)
            assert report.passed, (a, b)


def test_boundary_probe_reduces_to_c1():
    # G(x, .) vanishes identically for boundary x, so the right side
    # collapses to C1 there; the oracle pair returns the boundary datum
    sol = shoot(1.0, 0.5, SourceFn.power(7.0))
    x = np.array([0.0, 0.0, 1.0])
    rhs_oracle = representation_rhs(x, sol, oracle_constants(1.0, 0.5), RULE)
    assert rhs_oracle == pytest.approx(1.0, abs=1e-12)
    rhs_paper = representation_rhs(x, sol, paper_constants(1.0, 0.5), RULE)
    assert rhs_paper == pytest.approx(3.0 * math.sqrt(math.pi), abs=1e-12)


def test_critical_source_representation():
    sol = shoot(1.0, 0.5, SourceFn.power(7.0))
    report = check_representation(sol, rule=RULE)
    assert report.passed
    assert report.max_abs_err <= 1e-4

    spline = sol.spline()
    for r in (0.0, 0.25, 0.5, 0.75):
        x = np.array([0.0, 0.0, r])
        rhs = representation_rhs(x, sol, rule=RULE)
        assert rhs == pytest.approx(float(spline(max(r, sol.grid[0]))), abs=1e-6)


def test_paper_constants_fail_by_an_order_a_margin():
    sol = shoot(1.0, 0.5, SourceFn.power(7.0))
    report = check_representation(sol, paper_constants(1.0, 0.5), RULE)
    assert not report.passed
    assert report.max_abs_err > 0.5


def test_monotone_dependence_on_the_source():
    # raising the source pointwise (p = 7 -> p = 6 on a v >= 1 profile)
    # lowers the right side at interior points because G > 0
    sol = shoot(2.0, 0.5, SourceFn.power(7.0))
    assert np.all(sol.v >= 1.0)
    spline = sol.spline()
    from greenlab.ball_kernel import boggio_g
    from greenlab.quadrature import exact_sum

    radii = np.clip(np.linalg.norm(RULE.points, axis=1), sol.grid[0], sol.grid[-1])
    vvals = spline(radii)
    for r in (0.0, 0.3, 0.6):
        x = np.array([0.0, 0.0, r])
        kern = boggio_g(x, RULE.points) * RULE.weights
        rhs7 = -exact_sum(kern * vvals**-7.0)
        rhs6 = -exact_sum(kern * vvals**-6.0)
        assert rhs6 < rhs7


def test_rotated_probe_matches_axis_probe():
    sol = shoot(1.0, 0.5, SourceFn.power(7.0))
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    x_axis = np.array([0.0, 0.0, 0.5])
    x_rot = q @ x_axis
    a = representation_rhs(x_axis, sol, rule=RULE)
    b = representation_rhs(x_rot, sol, rule=RULE)
    assert b == pytest.approx(a, abs=1e-6)
