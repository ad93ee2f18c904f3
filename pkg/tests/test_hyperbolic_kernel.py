import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import hyp2f1

from greenlab.hyperbolic_kernel import (
    HEAD_CONSTANT,
    TAIL_CONSTANT,
    KernelForm,
    ResolventOrder,
    gauss_2f1_euler,
    p2_green,
    p2_green_derivative,
    p2_green_partial_fraction,
    resolvent_green,
)


def test_canonical_spot_value():
    # cosh^2(rho/2) = 2, i.e. rho = 2 arccosh(sqrt 2); then
    # e^(-rho) = (sqrt 2 - 1)^2 = 3 - 2 sqrt 2
    rho = 2.0 * math.acosh(math.sqrt(2.0))
    want = (3.0 - 2.0 * math.sqrt(2.0)) / (8.0 * math.pi * math.sqrt(2.0))
    assert float(p2_green(rho)) == pytest.approx(want, rel=1e-14)
    assert want == pytest.approx(4.827e-3, rel=1e-3)


def test_head_and_tail_limits():
    assert float(p2_green(1e-7)) * 8.0 * math.pi == pytest.approx(1.0, abs=1e-6)
    # tail: G * 4 pi e^(3 rho / 2) -> 1
    assert float(p2_green(40.0)) * 4.0 * math.pi * math.exp(60.0) == pytest.approx(
        1.0, abs=1e-6
    )
    assert HEAD_CONSTANT == pytest.approx(1.0 / (8.0 * math.pi))
    assert TAIL_CONSTANT == pytest.approx(1.0 / (4.0 * math.pi))


def test_short_distance_expansion_has_linear_term():
    # 8 pi G = 1 - rho + 3/8 rho^2 + O(rho^3); the quadratic-only
    # expansion quoted in the source derivation misses the linear term
    rho = np.array([1e-4, 2e-4, 3e-4, 4e-4])
    fit = np.polyfit(rho, 8.0 * math.pi * p2_green(rho), 2)
    assert fit[2] == pytest.approx(1.0, abs=1e-9)
    assert fit[1] == pytest.approx(-1.0, rel=1e-6)
    assert fit[0] == pytest.approx(0.375, rel=1e-2)


def test_domain_errors():
    with pytest.raises(ValueError):
        p2_green(0.0)
    with pytest.raises(ValueError):
        p2_green(-1.0)
    with pytest.raises(ValueError):
        gauss_2f1_euler(1.0)
    with pytest.raises(ValueError):
        resolvent_green(-0.5, 1.0)


def test_four_forms_agree():
    rhos = np.logspace(-3, math.log10(40.0), 200)
    vals = {form: p2_green(rhos, form) for form in KernelForm}
    base = vals[KernelForm.CANONICAL]
    for form in KernelForm:
        assert np.max(np.abs(vals[form] / base - 1.0)) <= 1e-10, form


def test_gauss_2f1_closed_form():
    # hand evaluation at z = 1/2
    want = 16.0 * (math.sqrt(2.0) + 1.0 / math.sqrt(2.0) - 2.0)
    assert float(gauss_2f1_euler(0.5)) == pytest.approx(want, rel=1e-14)
    assert want == pytest.approx(1.941125, rel=1e-6)
    # z -> 0 limit
    assert float(gauss_2f1_euler(1e-8)) == pytest.approx(1.0, abs=1e-7)


def test_gauss_2f1_against_euler_quadrature_and_scipy():
    for z in np.arange(0.1, 0.95, 0.1):
        quad_val, err = quad(lambda t: 2.0 * t * (1.0 - z * t) ** -1.5, 0.0, 1.0,
                             epsabs=1e-13, epsrel=1e-13)
        closed = float(gauss_2f1_euler(z))
        assert closed == pytest.approx(quad_val, rel=1e-10)
        assert closed == pytest.approx(float(hyp2f1(1.5, 2.0, 3.0, z)), rel=1e-12)


def test_resolvent_examples():
    # nu = 1 restores -Delta; Newtonian behavior at short distance
    for rho in (1e-4, 1e-5):
        assert float(resolvent_green(1.0, rho)) * 4.0 * math.pi * rho == pytest.approx(
            1.0, abs=1e-3
        )
    want = math.exp(-0.5) / (4.0 * math.pi * math.sinh(1.0))
    assert float(resolvent_green(0.5, 1.0)) == pytest.approx(want, rel=1e-14)
    assert want == pytest.approx(0.04105, rel=1e-3)
    assert float(resolvent_green(ResolventOrder(0.5), 1.0)) == pytest.approx(want)


def test_resolvent_against_hypergeometric_lemma():
    # closed kernel e^(-nu rho)/(4 pi sinh rho) against the
    # prefactor * cosh^(1-n-2nu) * 2F1 form at n = 3
    for nu in (0.5, 1.5):
        pref = (
            math.gamma(1.0 + nu)
            * math.gamma(nu + 0.5)
            / (8.0 * math.pi**1.5 * math.gamma(2.0 * nu + 1.0))
        )
        for rho in np.linspace(0.1, 20.0, 30):
            z = 1.0 / math.cosh(rho / 2.0) ** 2
            lemma = (
                pref
                * math.cosh(rho / 2.0) ** (-2.0 - 2.0 * nu)
                * float(hyp2f1(nu + 1.0, nu + 0.5, 2.0 * nu + 1.0, z))
            )
            assert float(resolvent_green(nu, rho)) == pytest.approx(lemma, rel=1e-9)


def test_partial_fraction_form():
    rho = 2.0 * math.acosh(math.sqrt(2.0))
    assert float(p2_green_partial_fraction(rho)) == pytest.approx(
        float(p2_green(rho)), abs=1e-14
    )
    # the 1/sinh singularities cancel at short distance
    assert float(p2_green_partial_fraction(1e-6)) == pytest.approx(
        1.0 / (8.0 * math.pi), rel=1e-5
    )
    # positive and below half the slower resolvent at long distance
    assert 0.0 < float(p2_green_partial_fraction(30.0)) < 0.5 * float(
        resolvent_green(0.5, 30.0)
    )


def test_derivative_negative_and_fd():
    for rho in (0.1, 1.0, 5.0, 20.0):
        assert float(p2_green_derivative(rho)) < 0.0
    grid = np.linspace(0.1, 20.0, 100)
    h = 0.01
    fd = (
        p2_green(grid - 2 * h)
        - 8.0 * p2_green(grid - h)
        + 8.0 * p2_green(grid + h)
        - p2_green(grid + 2 * h)
    ) / (12.0 * h)
    dv = p2_green_derivative(grid)
    assert np.max(np.abs(fd - dv) / np.abs(dv)) <= 1e-8


def test_log_derivative_tail_rate():
    rho = 40.0
    ratio = float(p2_green_derivative(rho) / p2_green(rho))
    assert ratio == pytest.approx(-1.5, abs=1e-12)


def test_monotone_decrease():
    rhos = np.logspace(-3, math.log10(40.0), 200)
    vals = p2_green(rhos)
    assert np.all(vals > 0.0)
    assert np.all(np.diff(vals) < 0.0)
