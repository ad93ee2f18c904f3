"""Numerical audits of the closed-form surface and line integrals.

Every displayed integral evaluation used to assemble the boundary terms
of the clamped-plate representation is re-verified here by quadrature
against its closed form, each as a named :class:`CheckReport`:

* the Newtonian surface average  int dS/|x-y| = 4 pi,
* the cubed-distance integral    int dS/|x-y|^3 = 4 pi/(1-r^2),
* the x.y moment identity,
* the two pieces of the surface integral of Delta_y G,
* the four pieces of the surface integral of d/dnu Delta_y G,
* the (1 + r^2 - 2rt)^(-5/2) moment closed forms,
* the Euler-integral reduction of F(3/2, 2; 3; z).

Evaluation points sit on the polar axis, x = (0, 0, r); rotational
invariance is spot-checked separately at moderate radii. All checks are
normalization-free except the quarantined flux check, which pins the
kernel constant via int dS d/dnu Delta_y G = 16 pi C and the
requirement that clamped data reproduce constants (16 pi C = 1).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from . import ball_kernel
from .ball_kernel import BoggioConstant, normal_deriv_laplacian_y_g
from .hyperbolic_kernel import KernelForm, gauss_2f1_euler, p2_green
from .quadrature import SphereRule, composite_gauss, exact_sum, sphere_rule
from .report import CheckReport

__all__ = [
    "DEFAULT_R_LIST",
    "DEFAULT_T_BREAKS",
    "check_surface_newtonian",
    "check_surface_cubed",
    "check_moment_identity",
    "check_I11",
    "check_I12",
    "check_I1_ratio",
    "check_II_terms",
    "check_A52_moments",
    "check_hypergeom_reduction",
    "check_rotation_invariance",
    "run_identity_suite",
]

DEFAULT_R_LIST = tuple(round(0.1 * k, 10) for k in range(1, 10))

#: fixed theta panels; the polar refinement resolves the |x - y| peaks
#: at r up to 0.9 while each panel keeps Gauss-Legendre exactness
DEFAULT_T_BREAKS = (-1.0, 0.0, 0.9, 0.99, 1.0)

_REL_TOL = 1e-8
_ABS_TOL = 1e-9


def _suite_rule(n_theta: int, n_phi: int) -> SphereRule:
    return sphere_rule(n_theta, n_phi, t_breaks=DEFAULT_T_BREAKS)


def _axis_point(r: float) -> np.ndarray:
    return np.array([0.0, 0.0, float(r)])


def _relative_check(
    name: str,
    r_list: Sequence[float],
    rule: SphereRule,
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    target: Callable[[float], float],
    tol: float,
    params: dict | None = None,
) -> CheckReport:
    worst_abs = worst_rel = 0.0
    for r in r_list:
        x = _axis_point(r)
        value = rule.integrate(lambda dirs: integrand(x, dirs))
        want = target(float(r))
        err = abs(value - want)
        worst_abs = max(worst_abs, err)
        worst_rel = max(worst_rel, err / abs(want))
    return CheckReport.from_errors(
        name,
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        tolerance=tol,
        samples=len(r_list),
        params={"r_list": list(map(float, r_list)), **(params or {})},
    )


def check_surface_newtonian(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
) -> CheckReport:
    """int dS(y)/|x-y| over the unit sphere equals 4 pi for every |x| < 1."""
    rule = _suite_rule(n_theta, n_phi)
    return _relative_check(
        "surface-newtonian",
        r_list,
        rule,
        lambda x, y: 1.0 / np.linalg.norm(y - x, axis=-1),
        lambda r: 4.0 * math.pi,
        tol,
        params={"n_theta": n_theta, "n_phi": n_phi},
    )


def check_surface_cubed(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
) -> CheckReport:
    """int dS(y)/|x-y|^3 equals 4 pi / (1 - r^2)."""
    rule = _suite_rule(n_theta, n_phi)
    return _relative_check(
        "surface-cubed",
        r_list,
        rule,
        lambda x, y: np.linalg.norm(y - x, axis=-1) ** -3.0,
        lambda r: 4.0 * math.pi / (1.0 - r * r),
        tol,
        params={"n_theta": n_theta, "n_phi": n_phi},
    )


def check_moment_identity(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
) -> CheckReport:
    """int (x.y) dS/|x-y|^3 equals r^2 int dS/|x-y|^3 (radial differentiation
    of the Newtonian identity)."""
    rule = _suite_rule(n_theta, n_phi)
    worst_abs = worst_rel = 0.0
    for r in r_list:
        x = _axis_point(r)
        lhs = rule.integrate(
            lambda y: np.sum(x * y, axis=-1) / np.linalg.norm(y - x, axis=-1) ** 3
        )
        rhs = r * r * rule.integrate(
            lambda y: np.linalg.norm(y - x, axis=-1) ** -3.0
        )
        err = abs(lhs - rhs)
        worst_abs = max(worst_abs, err)
        if rhs != 0.0:
            worst_rel = max(worst_rel, err / abs(rhs))
    return CheckReport.from_errors(
        "surface-moment-identity",
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        tolerance=tol,
        samples=len(r_list),
        params={"r_list": list(map(float, r_list)), "n_theta": n_theta},
    )


def check_I11(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
) -> CheckReport:
    """First piece of the boundary integral of Delta_y G:
    int (2r^2 + 2)/|x-y| dS = 8 pi (r^2 + 1)."""
    rule = _suite_rule(n_theta, n_phi)
    return _relative_check(
        "I1-first",
        r_list,
        rule,
        lambda x, y: (2.0 * (x @ x) + 2.0) / np.linalg.norm(y - x, axis=-1),
        lambda r: 8.0 * math.pi * (r * r + 1.0),
        tol,
        params={"n_theta": n_theta, "n_phi": n_phi},
    )


def check_I12(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
) -> CheckReport:
    """Second piece: int 4 r^2 (y-x).(y-x*) / |x-y|^3 dS = 16 pi r^2.

    Written with r^2 (y - x*) = r^2 y - x, regular for all interior x.
    """
    rule = _suite_rule(n_theta, n_phi)

    def integrand(x, y):
        r2 = x @ x
        return (
            4.0 * np.sum((y - x) * (r2 * y - x), axis=-1)
            / np.linalg.norm(y - x, axis=-1) ** 3
        )

    return _relative_check(
        "I1-second",
        r_list,
        rule,
        integrand,
        lambda r: 16.0 * math.pi * r * r,
        tol,
        params={"n_theta": n_theta, "n_phi": n_phi},
    )


def check_I1_ratio(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
) -> CheckReport:
    """Normalization-free total: (I1_first - I1_second)/(8 pi) = 1 - r^2."""
    rule = _suite_rule(n_theta, n_phi)
    worst_abs = worst_rel = 0.0
    for r in r_list:
        x = _axis_point(r)
        r2 = float(r) ** 2
        first = rule.integrate(
            lambda y: (2.0 * r2 + 2.0) / np.linalg.norm(y - x, axis=-1)
        )
        second = rule.integrate(
            lambda y: 4.0
            * np.sum((y - x) * (r2 * y - x), axis=-1)
            / np.linalg.norm(y - x, axis=-1) ** 3
        )
        got = (first - second) / (8.0 * math.pi)
        want = 1.0 - r2
        err = abs(got - want)
        worst_abs = max(worst_abs, err)
        worst_rel = max(worst_rel, err / abs(want))
    return CheckReport.from_errors(
        "I1-total-ratio",
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        tolerance=tol,
        samples=len(r_list),
        params={"r_list": list(map(float, r_list)), "n_theta": n_theta},
    )


def check_II_terms(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
    abs_tol: float = _ABS_TOL,
    constant: BoggioConstant | float | None = None,
) -> list[CheckReport]:
    """The four pieces of the flux integral int d/dnu Delta_y G dS.

    The odd pieces vanish (II1 = II4 = 0, absolute comparison), the even
    pieces have closed forms II2 = 16 pi r^2 and II3 = 4 pi, and the
    assembled flux is constant in r. The constancy check is reported
    normalization-free (flux / C = 16 pi); the final report quarantines
    the one normalization-sensitive statement, flux = 1, which forces
    C = 1/(16 pi) and acts as the erratum detector for the other
    candidate constants.
    """
    rule = _suite_rule(n_theta, n_phi)
    C = ball_kernel._const(constant)
    reports: list[CheckReport] = []
    common = {"r_list": list(map(float, r_list)), "n_theta": n_theta}

    def ii1(x, y):
        r2 = x @ x
        d = np.linalg.norm(y - x, axis=-1)
        s = np.sum(x * y, axis=-1)
        return -(2.0 * r2 * r2 + 6.0) * (1.0 - s / r2) / d**3

    def ii2(x, y):
        r2 = x @ x
        d = np.linalg.norm(y - x, axis=-1)
        q = r2 * y - x
        return 12.0 * np.sum((y - x) * q, axis=-1) * (r2 - np.sum(x * y, axis=-1)) / d**5

    def ii3(x, y):
        d = np.linalg.norm(y - x, axis=-1)
        return (1.0 - np.sum(x * y, axis=-1)) / d**3

    def ii4(x, y):
        r2 = x @ x
        d = np.linalg.norm(y - x, axis=-1)
        return (1.0 - np.sum(x * y, axis=-1) / r2) / d**3

    for name, fn in (("II1-vanishes", ii1), ("II4-vanishes", ii4)):
        worst = max(
            abs(rule.integrate(lambda y: fn(_axis_point(r), y))) for r in r_list
        )
        reports.append(
            CheckReport.from_errors(
                name,
                max_abs_err=worst,
                max_rel_err=worst,
                tolerance=abs_tol,
                samples=len(r_list),
                params=common,
                zero_target=True,
            )
        )

    reports.append(
        _relative_check(
            "II2", r_list, rule, ii2, lambda r: 16.0 * math.pi * r * r, tol, common
        )
    )
    reports.append(
        _relative_check(
            "II3", r_list, rule, ii3, lambda r: 4.0 * math.pi, tol, common
        )
    )

    # normalization-free shape: flux / C must be the constant 16 pi
    fluxes = [
        rule.integrate(
            lambda y: normal_deriv_laplacian_y_g(_axis_point(r), y, constant)
        )
        for r in r_list
    ]
    shape_err = max(abs(f / C - 16.0 * math.pi) for f in fluxes)
    reports.append(
        CheckReport.from_errors(
            "II-total-shape",
            max_abs_err=shape_err,
            max_rel_err=shape_err / (16.0 * math.pi),
            tolerance=tol,
            samples=len(r_list),
            params={**common, "constant": C},
        )
    )

    # quarantined normalization: reproducing constants needs flux exactly 1
    norm_err = max(abs(f - 1.0) for f in fluxes)
    reports.append(
        CheckReport.from_errors(
            "II-total-normalization",
            max_abs_err=norm_err,
            max_rel_err=norm_err,
            tolerance=tol,
            samples=len(r_list),
            params={**common, "constant": C, "required_flux": 1.0},
        )
    )
    return reports


def _a52_breaks(r: float) -> list[float]:
    """Panels on [-1, 1] refined toward t = 1, where A(t) is smallest."""
    breaks = [-1.0, 0.0]
    gap = 1.0
    floor = max((1.0 - r) ** 2 / 10.0, 1e-12)
    while gap > floor:
        gap /= 10.0
        breaks.append(1.0 - gap)
    breaks.append(1.0)
    return breaks


def check_A52_moments(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n: int = 64,
    tol: float = _REL_TOL,
) -> CheckReport:
    """Closed forms of int_-1^1 t^k (1 + r^2 - 2 r t)^(-5/2) dt, k = 0, 1, 2."""
    worst_abs = worst_rel = 0.0
    for r in r_list:
        denom = 3.0 * (1.0 - r * r) ** 3
        targets = (
            2.0 * (3.0 + r * r) / denom,
            2.0 * r * (5.0 - r * r) / denom,
            2.0 * (-2.0 * r**4 + 5.0 * r * r + 1.0) / denom,
        )
        breaks = _a52_breaks(float(r))
        for k, want in enumerate(targets):
            got = composite_gauss(
                lambda t: t**k * (1.0 + r * r - 2.0 * r * t) ** -2.5, breaks, n
            )
            err = abs(got - want)
            worst_abs = max(worst_abs, err)
            if want != 0.0:
                worst_rel = max(worst_rel, err / abs(want))
    return CheckReport.from_errors(
        "A52-moments",
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        tolerance=tol,
        samples=3 * len(r_list),
        params={"r_list": list(map(float, r_list)), "n": n},
    )


def check_hypergeom_reduction(
    rho_list: Sequence[float] = (0.01, 0.5, 2.0 * math.asinh(1.0), 5.0, 20.0),
    n: int = 64,
    tol: float = 1e-9,
) -> CheckReport:
    """Euler integral 2 int_0^1 t (1 - z t)^(-3/2) dt vs the closed form of
    F(3/2, 2; 3; z) at z = sech^2(rho/2), plus tanh/coth vs canonical kernel."""
    worst_abs = worst_rel = 0.0
    for rho in rho_list:
        z = 1.0 / math.cosh(rho / 2.0) ** 2
        # refine toward t = 1 where (1 - z t) is smallest
        breaks = [0.0]
        gap = 1.0
        while gap > (1.0 - z) / 10.0 and gap > 1e-14:
            gap /= 10.0
            breaks.append(1.0 - gap)
        breaks.append(1.0)
        euler = composite_gauss(lambda t: 2.0 * t * (1.0 - z * t) ** -1.5, breaks, n)
        closed = float(gauss_2f1_euler(z))
        err = abs(euler - closed) / abs(closed)
        worst_rel = max(worst_rel, err)
        worst_abs = max(worst_abs, abs(euler - closed))

        k_tanh = float(p2_green(rho, KernelForm.TANH_COTH))
        k_can = float(p2_green(rho, KernelForm.CANONICAL))
        err2 = abs(k_tanh - k_can) / abs(k_can)
        worst_rel = max(worst_rel, err2)
        worst_abs = max(worst_abs, abs(k_tanh - k_can))
    return CheckReport.from_errors(
        "hypergeometric-reduction",
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        tolerance=tol,
        samples=2 * len(rho_list),
        params={"rho_list": list(map(float, rho_list)), "n": n},
    )


def check_rotation_invariance(
    r_list: Sequence[float] = (0.2, 0.4, 0.6),
    n_theta: int = 64,
    n_phi: int = 64,
    orientations: int = 3,
    seed: int = 7,
    tol: float = _REL_TOL,
) -> CheckReport:
    """Newtonian and cubed surface integrals at rotated evaluation points.

    The axis-aligned suite exploits the rotation freedom of the closed
    forms; this spot check confirms nothing depends on it. Radii stay
    moderate because the plain product rule (no polar panels) must
    resolve the integrand wherever the rotation sends the peak.
    """
    rng = np.random.default_rng(seed)
    rule = sphere_rule(n_theta, n_phi)
    worst_abs = worst_rel = 0.0
    count = 0
    for r in r_list:
        for _ in range(orientations):
            m = rng.normal(size=(3, 3))
            q, _ = np.linalg.qr(m)
            x = q @ _axis_point(r)
            got_u = rule.integrate(lambda y: 1.0 / np.linalg.norm(y - x, axis=-1))
            got_a = rule.integrate(lambda y: np.linalg.norm(y - x, axis=-1) ** -3.0)
            for got, want in (
                (got_u, 4.0 * math.pi),
                (got_a, 4.0 * math.pi / (1.0 - r * r)),
            ):
                err = abs(got - want)
                worst_abs = max(worst_abs, err)
                worst_rel = max(worst_rel, err / abs(want))
            count += 2
    return CheckReport.from_errors(
        "rotation-invariance",
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        tolerance=tol,
        samples=count,
        seed=seed,
        params={"r_list": list(map(float, r_list)), "n_theta": n_theta},
    )


def run_identity_suite(
    r_list: Sequence[float] = DEFAULT_R_LIST,
    n_theta: int = 64,
    n_phi: int = 64,
    tol: float = _REL_TOL,
    abs_tol: float = _ABS_TOL,
) -> list[CheckReport]:
    """Run every identity check and return the reports in a fixed order."""
    reports = [
        check_surface_newtonian(r_list, n_theta, n_phi, tol),
        check_surface_cubed(r_list, n_theta, n_phi, tol),
        check_moment_identity(r_list, n_theta, n_phi, tol),
        check_I11(r_list, n_theta, n_phi, tol),
        check_I12(r_list, n_theta, n_phi, tol),
        check_I1_ratio(r_list, n_theta, n_phi, tol),
    ]
    reports.extend(check_II_terms(r_list, n_theta, n_phi, tol, abs_tol))
    reports.append(check_A52_moments(r_list, n_theta, tol))
    reports.append(check_hypergeom_reduction(tol=max(tol, 1e-9)))
    reports.append(check_rotation_invariance(tol=tol))
    return reports
