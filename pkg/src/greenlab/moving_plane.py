"""Sampling audits of the moving-plane kernel inequalities.

For the hyperplane x1 = lambda with cap Sigma = {x in B : x1 < lambda},
the sliding-plane argument rests on two kernel lemmas:

* sign:    dG/dx1 (x, y) < 0 and dG/dx1 (x, y) + dG/dx1 (x, ybar) <= 0
           for x on the plane inside the ball and y in the cap (the
           pair sum is strict for lambda > 0);
* compare: G(x, y) > max(G(x, ybar), G(xbar, y)) and
           G(x, y) - G(xbar, ybar) > |G(x, ybar) - G(xbar, y)|
           for x, y in the cap, with G extended by zero outside the ball.

These are open inequalities on 5- and 6-dimensional parameter sets, so
they are audited by seeded uniform sampling. A sample counts as a
violation only when the inequality fails by more than the strictness
margin 1e-14; that separates genuine counterexamples from roundoff at
the equality boundaries (points near the sphere or the plane drive the
quantities to zero legitimately). Worst observed margins are recorded
in the report parameters.

Solution-level monotonicity checks for radial profiles live here too.
"""

from __future__ import annotations

import numpy as np

from .ball_kernel import boggio_g, grad_x_g
from .geometry import PlaneReflector
from .radial_solver import RadialSolution
from .report import CheckReport

__all__ = [
    "STRICTNESS_MARGIN",
    "audit_g_sign",
    "audit_g_compare",
    "check_monotone_radial",
    "check_boundary_x1_derivative",
]

STRICTNESS_MARGIN = 1e-14

#: pairs closer than this are resampled; the gradient is undefined on
#: the diagonal and the audit statements assume x != y
_MIN_SEPARATION = 1e-8


def _sample_cap(rng, lam: float, n: int) -> np.ndarray:
    """Uniform points of the cap {y in B1 : y1 < lam}, by rejection."""
    out = np.empty((n, 3))
    filled = 0
    while filled < n:
        cand = rng.uniform(-1.0, 1.0, size=(2 * (n - filled) + 16, 3))
        keep = (np.sum(cand * cand, axis=1) < 1.0) & (cand[:, 0] < lam)
        kept = cand[keep]
        take = min(len(kept), n - filled)
        out[filled : filled + take] = kept[:take]
        filled += take
    return out


def _sample_plane_disk(rng, lam: float, n: int) -> np.ndarray:
    """Uniform points of the disk T_lam intersected with the ball."""
    radius = np.sqrt(max(1.0 - lam * lam, 0.0))
    rr = radius * np.sqrt(rng.uniform(size=n))
    th = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.column_stack([np.full(n, lam), rr * np.cos(th), rr * np.sin(th)])


def _zero_extended_g(x, y) -> np.ndarray:
    """G with the trivial extension by zero outside the open ball."""
    inside = (np.sum(np.asarray(x) ** 2, axis=-1) < 1.0) & (
        np.sum(np.asarray(y) ** 2, axis=-1) < 1.0
    )
    return np.where(inside, boggio_g(x, y), 0.0)


def audit_g_sign(
    lam: float,
    n_samples: int = 100_000,
    seed: int = 42,
    margin: float = STRICTNESS_MARGIN,
) -> CheckReport:
    """Audit the sign lemma for dG/dx1 on the plane x1 = lam.

    Draws x uniformly on the plane disk and y uniformly in the cap,
    evaluates the analytic gradient, and counts failures beyond the
    margin. For lam = 0 the pair sum vanishes identically by reflection
    symmetry, so only |sum| <= margin equality cases are expected there;
    they are counted separately.
    """
    if not 0.0 <= lam < 1.0:
        raise ValueError("lam must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    reflector = PlaneReflector(lam)
    xs = _sample_plane_disk(rng, lam, n_samples)
    ys = _sample_cap(rng, lam, n_samples)
    close = np.linalg.norm(xs - ys, axis=1) < _MIN_SEPARATION
    if np.any(close):
        ys[close] = _sample_cap(rng, lam, int(np.sum(close)))

    g1 = grad_x_g(xs, ys)[:, 0]
    ybar = reflector.reflect(ys)
    inside = np.sum(ybar * ybar, axis=1) < 1.0
    g2 = np.zeros_like(g1)
    if np.any(inside):
        g2[inside] = grad_x_g(xs[inside], ybar[inside])[:, 0]
    pair = g1 + g2

    violations = int(np.sum(g1 > margin)) + int(np.sum(pair > margin))
    equalities = int(np.sum(np.abs(pair) <= 1e-12)) if lam == 0.0 else 0
    worst = max(float(np.max(g1)), float(np.max(pair)))
    return CheckReport.from_errors(
        "moving-plane-g-sign",
        max_abs_err=float(violations),
        max_rel_err=float(violations),
        tolerance=0.0,
        samples=n_samples,
        seed=seed,
        zero_target=True,
        params={
            "lambda": lam,
            "margin": margin,
            "violations": violations,
            "equality_cases": equalities,
            "worst_value": worst,
        },
    )


def audit_g_compare(
    lam: float,
    n_samples: int = 100_000,
    seed: int = 7,
    margin: float = STRICTNESS_MARGIN,
) -> CheckReport:
    """Audit the comparison lemma for reflected kernel arguments.

    Draws x != y in the cap; reflected points may leave the ball, where
    the zero extension applies and the first inequality degenerates to
    plain positivity of G.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    reflector = PlaneReflector(lam)
    xs = _sample_cap(rng, lam, n_samples)
    ys = _sample_cap(rng, lam, n_samples)
    close = np.linalg.norm(xs - ys, axis=1) < _MIN_SEPARATION
    if np.any(close):
        ys[close] = _sample_cap(rng, lam, int(np.sum(close)))
    xbar = reflector.reflect(xs)
    ybar = reflector.reflect(ys)

    g = boggio_g(xs, ys)
    g_xyb = _zero_extended_g(xs, ybar)
    g_xby = _zero_extended_g(xbar, ys)
    g_xbyb = _zero_extended_g(xbar, ybar)

    first = g - np.maximum(g_xyb, g_xby)
    second = (g - g_xbyb) - np.abs(g_xyb - g_xby)
    violations = int(np.sum(first < -margin)) + int(np.sum(second < -margin))
    return CheckReport.from_errors(
        "moving-plane-g-compare",
        max_abs_err=float(violations),
        max_rel_err=float(violations),
        tolerance=0.0,
        samples=n_samples,
        seed=seed,
        zero_target=True,
        params={
            "lambda": lam,
            "margin": margin,
            "violations": violations,
            "worst_first": float(np.min(first)),
            "worst_second": float(np.min(second)),
        },
    )


def check_monotone_radial(sol: RadialSolution, tol: float = 0.0) -> CheckReport:
    """Strict radial monotonicity of a solved profile.

    Asserts v_{i+1} > v_i on every grid interval and reports the minimum
    increment. The zero-source, zero-slope case is constant and fails by
    design; it is the degenerate boundary case of the statement.
    """
    increments = np.diff(sol.v)
    min_inc = float(np.min(increments))
    violations = int(np.sum(increments <= tol))
    return CheckReport.from_errors(
        "radial-monotonicity",
        max_abs_err=float(violations),
        max_rel_err=float(violations),
        tolerance=0.0,
        samples=len(increments),
        zero_target=True,
        params={
            "a": sol.a,
            "b": sol.b,
            "source": sol.source.describe(),
            "min_increment": min_inc,
        },
    )


def check_boundary_x1_derivative(
    sol: RadialSolution,
    l_list=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    n_samples: int = 2_000,
    seed: int = 11,
) -> CheckReport:
    """Positivity of dv/dx1 on the plane sections T_l inside the ball.

    For a radial profile dv/dx1 = v'(r) x1 / r, evaluated on uniformly
    sampled points of each section (x1 = l > 0, so positivity reduces to
    v' > 0 at the sampled radii).
    """
    rng = np.random.default_rng(seed)
    dv = sol.dv_spline()
    violations = 0
    count = 0
    for l in l_list:
        pts = _sample_plane_disk(rng, float(l), n_samples)
        radii = np.linalg.norm(pts, axis=1)
        radii = np.clip(radii, sol.grid[0], sol.grid[-1])
        vals = dv(radii) * pts[:, 0] / radii
        violations += int(np.sum(vals <= 0.0))
        count += n_samples
    return CheckReport.from_errors(
        "boundary-x1-derivative",
        max_abs_err=float(violations),
        max_rel_err=float(violations),
        tolerance=0.0,
        samples=count,
        seed=seed,
        zero_target=True,
        params={"l_list": list(map(float, l_list)), "violations": violations},
    )
