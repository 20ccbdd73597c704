"""Dense vector operators and signed-margin region predicates.

All operators act on the last axis, so a single implementation serves both
single points (shape ``(n,)``) and sample batches (shape ``(..., n)``).
Regions expose a continuous signed margin ``g`` with ``g <= 0`` exactly on
the closed region; event location and rejection sampling both bisect on
these margins rather than on booleans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class GeometryError(ValueError):
    pass


class ZeroDirection(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class NotUnit(GeometryError):
    pass


class MalformedRegion(GeometryError):
    pass


UNIT_NORM_TOL = 1e-9

_COMPARISONS = ("=", "<", ">", "<=", ">=")
_HALVES = ("<", ">", "<=", ">=")


def as_vector(x, n: int | None = None) -> np.ndarray:
    """Validate and freeze a point of R^n (n >= 2, finite entries)."""
    v = np.array(x, dtype=float)
    if v.ndim != 1 or v.shape[0] < 2:
        raise DimensionMismatch(f"expected a vector of dimension >= 2, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionMismatch(f"expected dimension {n}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise GeometryError("vector entries must be finite")
    v.setflags(write=False)
    return v


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum(a * b, axis=-1)


def _check_direction(z: np.ndarray, x: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    if z.shape[-1] != x.shape[-1]:
        raise DimensionMismatch(f"direction dim {z.shape[-1]} != point dim {x.shape[-1]}")
    if np.any(_dot(z, z) == 0.0):
        raise ZeroDirection("direction vector must be nonzero")
    return z


def par_proj(z, x) -> np.ndarray:
    """Project x onto the line spanned by z: (z^T x / ||z||^2) z."""
    z = _check_direction(z, np.asarray(x, dtype=float))
    x = np.asarray(x, dtype=float)
    coef = _dot(z, x) / _dot(z, z)
    return coef[..., None] * z if coef.ndim else coef * z


def orth_proj(z, x) -> np.ndarray:
    """Project x onto the hyperplane orthogonal to z."""
    return np.asarray(x, dtype=float) - par_proj(z, x)


def reflect(z, x) -> np.ndarray:
    """Householder reflection of x about the hyperplane orthogonal to z."""
    return np.asarray(x, dtype=float) - 2.0 * par_proj(z, x)


def pi_theta(z, theta: float, x) -> np.ndarray:
    """Apply cos^2(theta)*orth_proj(z) - sin^2(theta)*par_proj(z) to x."""
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    p = par_proj(z, x)
    return c2 * (np.asarray(x, dtype=float) - p) - s2 * p


def geodesic_dist(u, v) -> float:
    """Angle in [0, pi] between two unit vectors (arccos of clamped dot)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise DimensionMismatch("mismatched dimensions")
    for w in (u, v):
        if abs(math.sqrt(float(_dot(w, w))) - 1.0) > UNIT_NORM_TOL:
            raise NotUnit("input must be a unit vector (tolerance 1e-9)")
    return math.acos(min(1.0, max(-1.0, float(_dot(u, v)))))


def cone_quadratic(vertex, axis, half_angle: float, x) -> np.ndarray:
    """Quadratic form (x-c)^T pi^theta(v) (x-c) of the cone C(c, v, theta).

    Computed as cos^2(theta)*||x-c||^2 - (v^T(x-c))^2/||v||^2, which equals
    the projector form identically and costs two dot products.
    """
    v = np.asarray(axis, dtype=float)
    u = np.asarray(x, dtype=float) - np.asarray(vertex, dtype=float)
    t = _dot(v, u)
    return math.cos(half_angle) ** 2 * _dot(u, u) - t * t / float(np.dot(v, v))


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise MalformedRegion("ball radius must be positive and finite")


@dataclass(frozen=True)
class Line:
    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", as_vector(self.point))
        object.__setattr__(self, "direction", as_vector(self.direction, self.point.shape[0]))
        if float(np.dot(self.direction, self.direction)) == 0.0:
            raise MalformedRegion("line direction must be nonzero")


@dataclass(frozen=True)
class HalfSpace:
    point: np.ndarray
    normal: np.ndarray
    cmp: str = "<="

    def __post_init__(self):
        object.__setattr__(self, "point", as_vector(self.point))
        object.__setattr__(self, "normal", as_vector(self.normal, self.point.shape[0]))
        if float(np.dot(self.normal, self.normal)) == 0.0:
            raise MalformedRegion("half-space normal must be nonzero")
        if self.cmp not in _COMPARISONS:
            raise MalformedRegion(f"bad comparison {self.cmp!r}")


@dataclass(frozen=True)
class Cone:
    vertex: np.ndarray
    axis: np.ndarray
    half_angle: float
    cmp: str = "<="

    def __post_init__(self):
        object.__setattr__(self, "vertex", as_vector(self.vertex))
        object.__setattr__(self, "axis", as_vector(self.axis, self.vertex.shape[0]))
        if float(np.dot(self.axis, self.axis)) == 0.0:
            raise MalformedRegion("cone axis must be nonzero")
        if self.cmp not in _COMPARISONS:
            raise MalformedRegion(f"bad comparison {self.cmp!r}")


@dataclass(frozen=True)
class HalfCone:
    """Conic region cut by the hyperplane through the vertex normal to the axis."""

    vertex: np.ndarray
    axis: np.ndarray
    half_angle: float
    cmp: str = "<="
    half: str = "<="

    def __post_init__(self):
        object.__setattr__(self, "vertex", as_vector(self.vertex))
        object.__setattr__(self, "axis", as_vector(self.axis, self.vertex.shape[0]))
        if float(np.dot(self.axis, self.axis)) == 0.0:
            raise MalformedRegion("cone axis must be nonzero")
        if self.cmp not in _COMPARISONS:
            raise MalformedRegion(f"bad comparison {self.cmp!r}")
        if self.half not in _HALVES:
            raise MalformedRegion(f"bad half selector {self.half!r}")


@dataclass(frozen=True)
class Helmet:
    """Spherical shell [inner, outer] around ``center`` with the cap inside
    the ball of radius ``mu*||center||`` centered at ``mu*center`` removed."""

    center: np.ndarray
    inner: float
    outer: float
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not (0.0 < self.inner <= self.outer):
            raise MalformedRegion("helmet requires 0 < inner <= outer")
        if not self.mu > 0.0:
            raise MalformedRegion("helmet requires mu > 0")


Region = Ball | Line | HalfSpace | Cone | HalfCone | Helmet


def _signed(value: np.ndarray, cmp: str) -> np.ndarray:
    # "<"/"<=" keep the sign, ">"/">=" negate, "=" takes |value|; strict
    # variants share the closed margin (margins describe closed regions).
    if cmp in ("<", "<="):
        return value
    if cmp in (">", ">="):
        return -value
    return np.abs(value)


def helmet_margin(center, inner: float, outer: float, mu: float, x) -> np.ndarray:
    c = np.asarray(center, dtype=float)
    x = np.asarray(x, dtype=float)
    r = np.sqrt(_dot(x - c, x - c))
    cap_c = mu * c
    cap_r = math.sqrt(float(np.dot(cap_c, cap_c)))
    d_cap = np.sqrt(_dot(x - cap_c, x - cap_c))
    return np.maximum(np.maximum(inner - r, r - outer), cap_r - d_cap)


def region_margin(region: Region, x) -> float | np.ndarray:
    """Continuous signed value, non-positive exactly on the closed region."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != _region_dim(region):
        raise DimensionMismatch("point dimension does not match region")
    if isinstance(region, Ball):
        d = x - region.center
        g = np.sqrt(_dot(d, d)) - region.radius
    elif isinstance(region, Line):
        d = orth_proj(region.direction, x - region.point)
        g = np.sqrt(_dot(d, d))
    elif isinstance(region, HalfSpace):
        g = _signed(_dot(region.normal, x - region.point), region.cmp)
    elif isinstance(region, Cone):
        g = _signed(cone_quadratic(region.vertex, region.axis, region.half_angle, x), region.cmp)
    elif isinstance(region, HalfCone):
        q = _signed(cone_quadratic(region.vertex, region.axis, region.half_angle, x), region.cmp)
        h = _signed(_dot(region.axis, x - region.vertex), region.half)
        g = np.maximum(q, h)
    elif isinstance(region, Helmet):
        g = helmet_margin(region.center, region.inner, region.outer, region.mu, x)
    else:
        raise MalformedRegion(f"unknown region {region!r}")
    return float(g) if np.ndim(g) == 0 else g


def region_contains(region: Region, x, tol: float = 0.0) -> bool | np.ndarray:
    if tol < 0.0:
        raise GeometryError("tol must be >= 0")
    g = region_margin(region, x)
    return g <= tol if np.ndim(g) else bool(g <= tol)


def _region_dim(region: Region) -> int:
    for attr in ("center", "point", "vertex"):
        if hasattr(region, attr):
            return getattr(region, attr).shape[0]
    raise MalformedRegion(f"unknown region {region!r}")
