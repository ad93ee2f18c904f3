import math

import numpy as np
import pytest
from scipy.special import roots_legendre

from greenlab.ball_kernel import C_DEFAULT, boggio_g, laplacian_y_g
from greenlab.quadrature import (
    QuadratureConvergenceError,
    ball_integral,
    ball_integral_centered,
    composite_gauss,
    gauss_legendre,
    halfline_integral,
    sphere_rule,
)


def test_gauss_legendre_small_rules():
    r1 = gauss_legendre(1)
    assert np.allclose(r1.nodes, [0.0]) and np.allclose(r1.weights, [2.0])
    r2 = gauss_legendre(2)
    assert np.allclose(r2.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)])
    assert np.allclose(r2.weights, [1.0, 1.0])


def test_gauss_legendre_matches_scipy():
    for n in (5, 16, 64, 200):
        rule = gauss_legendre(n)
        x, w = roots_legendre(n)
        assert np.max(np.abs(rule.nodes - x)) < 5e-15
        assert np.max(np.abs(rule.weights - w)) < 5e-14


def test_gauss_legendre_exactness():
    # n points integrate monomials through degree 2n - 1
    for n in (4, 16, 48):
        rule = gauss_legendre(n)
        assert abs(sum(rule.weights) - 2.0) < 1e-14
        for k in range(2 * n):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            got = float(np.sum(rule.weights * rule.nodes**k))
            assert abs(got - exact) <= 1e-12
    # the classic spot check: 16 points nail x^30
    r16 = gauss_legendre(16)
    assert abs(np.sum(r16.weights * r16.nodes**30) - 2.0 / 31.0) < 1e-13


def test_gauss_legendre_range_check():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_legendre(513)


def test_sphere_rule_basics():
    rule = sphere_rule(16, 16)
    assert abs(np.sum(rule.weights) - 4 * np.pi) <= 1e-12
    # odd monomials vanish
    for axis in range(3):
        moment = float(np.sum(rule.weights * rule.directions[:, axis]))
        assert abs(moment) <= 1e-12
    # quadratic zonal moment: int z^2 dS = 4 pi / 3
    m2 = float(np.sum(rule.weights * rule.directions[:, 2] ** 2))
    assert m2 == pytest.approx(4 * np.pi / 3, abs=1e-12)


def test_sphere_rule_newtonian_integrals():
    rule = sphere_rule(64, 32)
    x = np.array([0.0, 0.0, 0.5])
    got = rule.integrate(lambda y: 1.0 / np.linalg.norm(y - x, axis=-1))
    assert got == pytest.approx(4 * np.pi, rel=1e-12)
    got3 = rule.integrate(lambda y: np.linalg.norm(y - x, axis=-1) ** -3.0)
    assert got3 == pytest.approx(16 * np.pi / 3, rel=1e-10)


def test_sphere_rule_panels_keep_polynomial_exactness():
    rule = sphere_rule(8, 8, t_breaks=(-1.0, 0.0, 0.9, 0.99, 1.0))
    assert abs(np.sum(rule.weights) - 4 * np.pi) <= 1e-12
    m4 = float(np.sum(rule.weights * rule.directions[:, 2] ** 4))
    assert m4 == pytest.approx(4 * np.pi / 5, abs=1e-12)


def test_spectral_convergence_near_boundary():
    # doubling n_theta from 32 to 64 gains at least three orders for the
    # Newtonian integrand at |x| = 0.9
    x = np.array([0.0, 0.0, 0.9])
    errs = {}
    for n in (32, 64):
        rule = sphere_rule(n, 16)
        got = rule.integrate(lambda y: 1.0 / np.linalg.norm(y - x, axis=-1))
        errs[n] = abs(got - 4 * np.pi)
    assert errs[32] / max(errs[64], 1e-300) >= 1e3


def test_rules_are_deterministic():
    a = sphere_rule(24, 24)
    b = sphere_rule(24, 24)
    assert np.array_equal(a.directions, b.directions)
    assert np.array_equal(a.weights, b.weights)
    f = lambda y: 1.0 / np.linalg.norm(y - np.array([0.1, 0.2, 0.3]), axis=-1)
    assert a.integrate(f) == b.integrate(f)


def test_ball_integral_examples():
    sph = sphere_rule(24, 24)
    vol = ball_integral(lambda y: np.ones(len(y)), 24, sph)
    assert vol == pytest.approx(4 * np.pi / 3, rel=1e-13)
    m2 = ball_integral(lambda y: np.sum(y * y, axis=-1), 24, sph)
    assert m2 == pytest.approx(4 * np.pi / 5, rel=1e-13)
    # int_B G(0, y) dy = C int (1 - |y|)^2 = 4 pi C / 30
    g0 = ball_integral(lambda y: boggio_g(np.zeros(3), y), 32, sph)
    assert g0 == pytest.approx(4 * np.pi * C_DEFAULT.value / 30.0, rel=1e-12)


def test_ball_integral_rejects_nonfinite():
    sph = sphere_rule(8, 8)
    with pytest.raises(ValueError, match="not finite"):
        ball_integral(lambda y: np.full(len(y), np.nan), 8, sph)


def test_ball_integral_centered():
    # 1/|x - y| over the ball from the center: int r dr dS = 2 pi
    got = ball_integral_centered(np.zeros(3), lambda y: 1.0 / np.linalg.norm(y, axis=-1))
    assert got == pytest.approx(2 * np.pi, rel=1e-11)
    # the volume is center-independent
    x = np.array([0.3, 0.0, 0.0])
    vol = ball_integral_centered(x, lambda y: np.ones(len(y)))
    assert vol == pytest.approx(4 * np.pi / 3, abs=1e-10)
    # int_B Delta_y G(0, y) dy = 4 pi C int (6 - 4/r) r^2 dr = 0
    lap0 = ball_integral_centered(
        np.zeros(3), lambda y: laplacian_y_g(np.zeros(3), y)
    )
    assert abs(lap0) <= 1e-12


def test_ball_integral_centered_nonconvergence():
    # a rule far too coarse for an oscillatory integrand must report
    with pytest.raises(QuadratureConvergenceError):
        ball_integral_centered(
            np.zeros(3),
            lambda y: np.cos(60.0 * y[:, 0]) * np.cos(55.0 * y[:, 1]),
            levels=2,
            tol=1e-12,
            n_radial=4,
            n_sphere=4,
        )


def test_halfline_examples():
    got = halfline_integral(lambda r: np.exp(-r), 60.0, 200, decay_rate=1.0)
    assert got.value == pytest.approx(1.0, abs=1e-12)
    assert got.tail_bound == pytest.approx(math.exp(-60.0), rel=1e-12)

    # e^{-7 rho/2} sinh^2 rho -> 1/6 - 1/7 + 1/22 by partial fractions
    want = 1.0 / 6.0 - 1.0 / 7.0 + 1.0 / 22.0
    got2 = halfline_integral(
        lambda r: np.exp(-3.5 * r) * np.sinh(r) ** 2, 60.0, 300, decay_rate=1.5
    )
    assert got2.value == pytest.approx(want, rel=1e-12)

    # the mixed kernel-decay integrand converges
    got3 = halfline_integral(
        lambda r: np.exp(-1.5 * r) * np.exp(-3.5 * r) * np.sinh(r) ** 2,
        60.0,
        300,
        decay_rate=3.0,
    )
    assert np.isfinite(got3.value) and got3.value > 0.0


def test_halfline_tail_warning():
    with pytest.warns(UserWarning, match="tail bound"):
        halfline_integral(lambda r: np.exp(-r), 5.0, 64, decay_rate=1.0, tol=1e-12)


def test_composite_gauss_matches_single_panel():
    f = lambda t: np.exp(t) * np.sin(3 * t)
    single = gauss_legendre(48).integrate(f)
    split = composite_gauss(f, [-1.0, 0.2, 1.0], 48)
    assert split == pytest.approx(single, abs=1e-14)
