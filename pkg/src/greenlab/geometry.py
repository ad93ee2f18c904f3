"""Points, reflections and conformal factors on the unit ball.

Shared primitives: hyperplane reflections for the moving-plane audits,
the Kelvin inversion x -> x/|x|^2, the bracket [x,y] entering the
clamped-plate Green function, and Poincare-ball distance / conformal
factor for the ball <-> hyperbolic transport.

Most functions accept either a :class:`BallPoint` or a bare array of
3-vectors (shape ``(3,)`` or ``(..., 3)``) and broadcast over the batch
dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: |1 - |x|| below this counts as a boundary point.
BOUNDARY_TOL = 1e-12

#: closed-ball membership slack on the norm.
BALL_NORM_SLACK = 1e-14


def as_points(x) -> np.ndarray:
    """Coerce to a float array of 3-vectors, shape ``(3,)`` or ``(..., 3)``."""
    a = np.asarray(x, dtype=float)
    if a.shape[-1:] != (3,):
        raise ValueError(f"expected 3-vectors, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class BallPoint:
    """A point of the closed Euclidean unit ball in R^3.

    Doubles as a Poincare-ball-model point for the hyperbolic modules.
    Construction rejects points outside the closed ball (slack
    ``BALL_NORM_SLACK`` on the norm).
    """

    coords: np.ndarray

    def __init__(self, coords):
        a = as_points(coords)
        if a.shape != (3,):
            raise ValueError("BallPoint holds a single 3-vector")
        n = float(np.linalg.norm(a))
        if n > 1.0 + BALL_NORM_SLACK:
            raise ValueError(f"point outside the closed unit ball: |x| = {n!r}")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "coords", a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    @property
    def on_boundary(self) -> bool:
        return abs(1.0 - self.norm) <= BOUNDARY_TOL

    @property
    def interior(self) -> bool:
        return not self.on_boundary

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class PlaneReflector:
    """Reflection through the hyperplane ``x1 = lam``, ``lam in [0, 1)``."""

    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise ValueError(f"plane position must lie in [0, 1), got {self.lam}")

    def reflect(self, x) -> np.ndarray:
        return reflect(self, x)


def reflect(reflector: PlaneReflector, x) -> np.ndarray:
    """Reflect ``x`` through the plane ``x1 = lam`` (x1 -> 2*lam - x1).

    The image may land outside the ball; callers relying on the trivial
    zero extension of the Green function must test membership themselves.
    """
    a = as_points(x).copy()
    a[..., 0] = 2.0 * reflector.lam - a[..., 0]
    return a


def kelvin_point(x) -> np.ndarray:
    """Inversion x -> x/|x|^2 through the unit sphere.

    Undefined at the origin; raises there. The kernel module works with
    the combination |x|^2 * (y - x/|x|^2) = |x|^2 y - x, which stays
    regular at x = 0, so only code that needs the inverted point itself
    should call this.
    """
    a = as_points(x)
    n2 = np.sum(a * a, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise ValueError("kelvin_point is undefined at the origin")
    return a / n2


def bracket_xy(x, y) -> np.ndarray:
    """The bracket sqrt(|x|^2 |y|^2 - 2 x.y + 1).

    Symmetric in its arguments, equal to |x - y| when either point lies
    on the unit sphere, and bounded below by |1 - |x||y|| >= 0, so the
    radicand is clamped at zero only to absorb roundoff.
    """
    a = as_points(x)
    b = as_points(y)
    na2 = np.sum(a * a, axis=-1)
    nb2 = np.sum(b * b, axis=-1)
    ab = np.sum(a * b, axis=-1)
    return np.sqrt(np.maximum(na2 * nb2 - 2.0 * ab + 1.0, 0.0))


def hyperbolic_distance(x, y) -> np.ndarray:
    """Geodesic distance between interior points in the Poincare ball.

    Uses cosh(rho) = 1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)); the arccosh
    argument is clamped at 1 to absorb roundoff near coincident points.
    Reduces to log((1+|x|)/(1-|x|)) when y = 0.
    """
    a = as_points(x)
    b = as_points(y)
    na2 = np.sum(a * a, axis=-1)
    nb2 = np.sum(b * b, axis=-1)
    if np.any(na2 >= 1.0) or np.any(nb2 >= 1.0):
        raise ValueError("hyperbolic_distance needs interior points (|x| < 1)")
    d2 = np.sum((a - b) ** 2, axis=-1)
    arg = 1.0 + 2.0 * d2 / ((1.0 - na2) * (1.0 - nb2))
    return np.arccosh(np.maximum(arg, 1.0))


def conformal_factor(x) -> np.ndarray:
    """Poincare metric factor 2/(1 - |x|^2) at an interior point.

    Equals 2 cosh^2(rho/2) where rho is the hyperbolic distance of x
    from the origin.
    """
    a = as_points(x)
    n2 = np.sum(a * a, axis=-1)
    if np.any(n2 >= 1.0):
        raise ValueError("conformal_factor is undefined on and outside the sphere")
    return 2.0 / (1.0 - n2)


def rho_from_radius(r) -> np.ndarray:
    """Hyperbolic distance from the origin of a ball point at radius r."""
    r = np.asarray(r, dtype=float)
    if np.any((r < 0.0) | (r >= 1.0)):
        raise ValueError("radius must lie in [0, 1)")
    return np.log((1.0 + r) / (1.0 - r))


def radius_from_rho(rho) -> np.ndarray:
    """Inverse of :func:`rho_from_radius`: r = tanh(rho/2)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0):
        raise ValueError("rho must be nonnegative")
    return np.tanh(rho / 2.0)
