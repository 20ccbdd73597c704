"""Mode-dependent feedback and the flow/jump set membership it switches on.

Modes: 0 drives straight to the origin (-k0*x); +1/-1 slide around the
obstacle toward the auxiliary point p_m by projecting -k_m*(x - p_m) onto
the hyperplane orthogonal to (x - c), which keeps ||x - c|| constant.

Set membership is exposed through continuous margins (<= 0 inside, up to a
caller tolerance) so the simulator can bisect on them. The avoidance flow
set is the helmet intersected with the closed complement of the lower
half-cone around p_m - c: membership via the cone-exterior OR upper-half-
space branch. Its jump set is the closure of the complement, helmet-outside
OR lower-half-cone, cut to ||x - c|| >= epsilon. The two are exact closure
complements of each other, so together they cover the free space and share
only boundaries.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import geodesic_dist, helmet_margin, orth_proj
from .params import ValidatedParams

MODES = (-1, 0, 1)

#: membership tolerance used by verification-style point queries
DEFAULT_TOL = 1e-9


class ControllerError(ValueError):
    pass


class AtObstacleCenter(ControllerError):
    pass


class EmptyJumpTarget(ControllerError):
    """Neither cone complement admits the state: impossible on J0 unless the
    auxiliary-point geometry is broken."""


def _check_mode(m: int) -> int:
    if m not in MODES:
        raise ControllerError(f"mode must be one of {MODES}, got {m!r}")
    return m


def kappa(x, m: int, P: ValidatedParams) -> np.ndarray:
    """Control input for state x in mode m. Broadcasts over leading axes."""
    _check_mode(m)
    x = np.asarray(x, dtype=float)
    if m == 0:
        return -P.gain(0) * x
    d = x - P.c
    if np.any(np.sum(d * d, axis=-1) == 0.0):
        raise AtObstacleCenter("avoidance feedback undefined at the obstacle center")
    return -P.gain(m) * orth_proj(d, x - P.p(m))


def _cone_quad(P: ValidatedParams, m: int, angle: float, x: np.ndarray) -> np.ndarray:
    v = P.p(m) - P.c
    u = x - P.c
    t = np.sum(v * u, axis=-1)
    return math.cos(angle) ** 2 * np.sum(u * u, axis=-1) - t * t / float(np.dot(v, v))


def _axis_dot(P: ValidatedParams, m: int, x: np.ndarray) -> np.ndarray:
    return np.sum((P.p(m) - P.c) * (x - P.c), axis=-1)


def flow_margin(x, m: int, P: ValidatedParams) -> float | np.ndarray:
    """Signed membership margin of the mode-m flow set (<= 0 inside)."""
    _check_mode(m)
    x = np.asarray(x, dtype=float)
    d = x - P.c
    r = np.sqrt(np.sum(d * d, axis=-1))
    if m == 0:
        safety = helmet_margin(P.c, P.epsilon, P.eps_s, 0.5, x)
        g = np.maximum(P.epsilon - r, -safety)
    else:
        helm = helmet_margin(P.c, P.epsilon, P.eps_h, P.mu, x)
        outside_cone = -_cone_quad(P, m, P.psi, x)
        upper_half = -_axis_dot(P, m, x)
        g = np.maximum(helm, np.minimum(outside_cone, upper_half))
    return float(g) if np.ndim(g) == 0 else g


def jump_margin(x, m: int, P: ValidatedParams) -> float | np.ndarray:
    """Signed membership margin of the mode-m jump set (<= 0 inside)."""
    _check_mode(m)
    x = np.asarray(x, dtype=float)
    if m == 0:
        g = helmet_margin(P.c, P.epsilon, P.eps_s, 0.5, x)
    else:
        d = x - P.c
        r = np.sqrt(np.sum(d * d, axis=-1))
        helm = helmet_margin(P.c, P.epsilon, P.eps_h, P.mu, x)
        lower_half_cone = np.maximum(_cone_quad(P, m, P.psi, x), _axis_dot(P, m, x))
        g = np.maximum(P.epsilon - r, np.minimum(-helm, lower_half_cone))
    return float(g) if np.ndim(g) == 0 else g


def flow_set_contains(x, m: int, P: ValidatedParams, tol: float = DEFAULT_TOL):
    g = flow_margin(x, m, P)
    return g <= tol if np.ndim(g) else bool(g <= tol)


def jump_set_contains(x, m: int, P: ValidatedParams, tol: float = DEFAULT_TOL):
    g = jump_margin(x, m, P)
    return g <= tol if np.ndim(g) else bool(g <= tol)


def axis_clearance(x, m: int, P: ValidatedParams) -> float:
    """Geodesic angle between x - c and the axis line through p_m - c."""
    u = np.asarray(x, dtype=float) - P.c
    nu = float(np.linalg.norm(u))
    if nu == 0.0:
        raise AtObstacleCenter("clearance undefined at the obstacle center")
    v = P.p(m) - P.c
    u = u / nu
    v = v / float(np.linalg.norm(v))
    return min(geodesic_dist(u, v), geodesic_dist(u, -v))


def jump_candidates(x, P: ValidatedParams) -> list[int]:
    """Admissible jump targets from mode 0, best first.

    A target m' qualifies when x lies in the complement of the switching
    cone of half-angle psi_bar around p_m' - c. The ordering prefers the
    larger angular clearance from the cone axis; an exact tie puts +1 first.
    """
    clearances = {mp: axis_clearance(x, mp, P) for mp in (1, -1)}
    feasible = [mp for mp in (1, -1) if clearances[mp] >= P.psi_bar - 1e-9]
    if not feasible:
        raise EmptyJumpTarget(
            f"no switching cone admits x={np.asarray(x).tolist()} "
            f"(clearances {clearances}, psi_bar={P.psi_bar})"
        )
    if len(feasible) == 2 and clearances[-1] - clearances[1] > 1e-12:
        feasible = [-1, 1]
    return feasible


def jump_select(x, m: int, P: ValidatedParams) -> int:
    """Deterministic selection from the jump map at state x in mode m.

    Avoidance modes always hand back to the stabilizer; mode 0 picks the
    best entry of ``jump_candidates``.
    """
    _check_mode(m)
    if m != 0:
        return 0
    return jump_candidates(x, P)[0]
