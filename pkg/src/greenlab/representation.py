"""Integral representation of the clamped radial solution.

Verifies that a positive solution of Delta^2 v = -f(v) with clamped
data v = a, dv/dnu = b on the sphere satisfies

    v(x) = C1 + C2 (|x|^2 - 1) - int_B G(x, y) f(v(y)) dy.

With the kernel constant 1/(16 pi), the zero-source reproduction test
forces (C1, C2) = (a, b/2): the boundary flux integral of
d/dnu Delta_y G is exactly one and the integral of Delta_y G over the
sphere is (1 - r^2)/2. The (3 sqrt(pi) a, 3 sqrt(pi) b / 2) pair found
in the literature fails the boundary trace v -> a by the factor
3 sqrt(pi) and is kept solely for the erratum detectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ball_kernel import boggio_g
from .quadrature import SphereRule, exact_sum, gauss_legendre, sphere_rule
from .radial_solver import RadialSolution
from .report import CheckReport

__all__ = [
    "RepresentationConstants",
    "oracle_constants",
    "paper_constants",
    "BallRule",
    "ball_rule",
    "representation_rhs",
    "check_representation",
    "DEFAULT_PROBE_RADII",
]

#: 33 radial probes; spline interpolation and the ball rule both degrade
#: past r = 0.95, and the identity is an interior statement
DEFAULT_PROBE_RADII = tuple(np.linspace(0.0, 0.95, 33))


@dataclass(frozen=True)
class RepresentationConstants:
    """Boundary-term constants (C1, C2) with their provenance tag."""

    c1: float
    c2: float
    provenance: str = "oracle"


def oracle_constants(a: float, b: float) -> RepresentationConstants:
    """The pair (a, b/2) forced by the zero-source reproduction test."""
    return RepresentationConstants(c1=a, c2=b / 2.0, provenance="oracle")


def paper_constants(a: float, b: float) -> RepresentationConstants:
    """The quoted pair (3 sqrt(pi) a, 3 sqrt(pi) b / 2); erratum material."""
    s = 3.0 * math.sqrt(math.pi)
    return RepresentationConstants(c1=s * a, c2=s * b / 2.0, provenance="paper")


@dataclass(frozen=True)
class BallRule:
    """Product rule over the unit ball: GL radii x sphere rule."""

    points: np.ndarray
    weights: np.ndarray
    radial_n: int
    sphere: SphereRule

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.points, axis=-1)


def ball_rule(radial_n: int = 48, n_theta: int = 48, n_phi: int = 48) -> BallRule:
    r, wr = gauss_legendre(radial_n).mapped(0.0, 1.0)
    sph = sphere_rule(n_theta, n_phi)
    pts = (r[:, None, None] * sph.directions[None, :, :]).reshape(-1, 3)
    wts = ((wr * r * r)[:, None] * sph.weights[None, :]).ravel()
    return BallRule(points=pts, weights=wts, radial_n=radial_n, sphere=sph)


def representation_rhs(
    x,
    sol: RadialSolution,
    consts: RepresentationConstants | None = None,
    rule: BallRule | None = None,
) -> float:
    """Right-hand side C1 + C2(|x|^2 - 1) - int_B G(x, y) f(v(y)) dy.

    G is continuous on the closed ball, so the plain product rule needs
    no singular treatment; v is interpolated radially by a cubic spline
    on the solution grid.
    """
    consts = consts or oracle_constants(sol.a, sol.b)
    rule = rule or ball_rule()
    x = np.asarray(x, dtype=float).reshape(3)
    fv = _source_values(sol, rule)
    integral = exact_sum(rule.weights * boggio_g(x, rule.points) * fv)
    r2 = float(x @ x)
    return consts.c1 + consts.c2 * (r2 - 1.0) - integral


def _source_values(sol: RadialSolution, rule: BallRule) -> np.ndarray:
    """f(v(|y|)) at the ball rule points (independent of the probe)."""
    spline = sol.spline()
    radii = np.clip(rule.radii, sol.grid[0], sol.grid[-1])
    return np.asarray(sol.source(spline(radii)), dtype=float)


def check_representation(
    sol: RadialSolution,
    consts: RepresentationConstants | None = None,
    rule: BallRule | None = None,
    probe_radii=DEFAULT_PROBE_RADII,
    tol: float = 1e-4,
) -> CheckReport:
    """Sup over the radial probe set of |v(x) - rhs(x)|.

    Reported absolutely and relative to the boundary datum a. Probes sit
    on the z-axis; rotational invariance of both sides is inherited from
    the kernel and the radial profile.
    """
    consts = consts or oracle_constants(sol.a, sol.b)
    rule = rule or ball_rule()
    spline = sol.spline()
    fv = _source_values(sol, rule)
    worst = 0.0
    for r in probe_radii:
        x = np.array([0.0, 0.0, float(r)])
        integral = exact_sum(rule.weights * boggio_g(x, rule.points) * fv)
        rhs = consts.c1 + consts.c2 * (r * r - 1.0) - integral
        v_here = float(spline(np.clip(r, sol.grid[0], sol.grid[-1])))
        worst = max(worst, abs(rhs - v_here))
    return CheckReport.from_errors(
        f"representation-{consts.provenance}",
        max_abs_err=worst,
        max_rel_err=worst / abs(sol.a),
        tolerance=tol,
        samples=len(probe_radii),
        params={
            "a": sol.a,
            "b": sol.b,
            "source": sol.source.describe(),
            "c1": consts.c1,
            "c2": consts.c2,
            "provenance": consts.provenance,
            "radial_n": rule.radial_n,
        },
    )
