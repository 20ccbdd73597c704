import math

import numpy as np
import pytest

from helmnav import geometry as geo
from helmnav.geometry import (
    Ball,
    Cone,
    HalfCone,
    HalfSpace,
    Helmet,
    Line,
    cone_quadratic,
    geodesic_dist,
    orth_proj,
    par_proj,
    pi_theta,
    reflect,
    region_contains,
    region_margin,
)

RNG = np.random.default_rng(20240817)


def rand_vec(n, nonzero=False):
    while True:
        v = RNG.standard_normal(n)
        if not nonzero or np.linalg.norm(v) > 1e-6:
            return v


# ---------------------------------------------------------------------------
# projector / reflector operators


def test_par_proj_axis_aligned():
    assert np.allclose(par_proj([1.0, 0.0], [3.0, 4.0]), [3.0, 0.0])


def test_par_proj_scale_invariant():
    assert np.allclose(par_proj([2.0, 0.0], [3.0, 4.0]), [3.0, 0.0])


def test_par_proj_orthogonal_input():
    assert np.allclose(par_proj([1.0, 1.0], [1.0, -1.0]), [0.0, 0.0], atol=1e-15)


def test_orth_proj_examples():
    assert np.allclose(orth_proj([1.0, 0.0], [3.0, 4.0]), [0.0, 4.0])
    assert np.allclose(orth_proj([1.0, 1.0, 1.0], [1.0, 1.0, 1.0]), np.zeros(3), atol=1e-15)
    # hand evaluation of x - (z^T x/||z||^2. z) with z=(1,2), x=(5,0)
    assert np.allclose(orth_proj([1.0, 2.0], [5.0, 0.0]), [4.0, -2.0])


def test_reflect_examples():
    assert np.allclose(reflect([1.0, 0.0], [3.0, 4.0]), [-3.0, 4.0])
    z = rand_vec(4, nonzero=True)
    assert np.allclose(reflect(z, z), -z, atol=1e-12)


def test_reflect_reproduces_printed_mirror_point():
    c = np.array([1.0, 1.0, 1.0])
    p1 = np.array([0.424, -0.155, -0.155])
    assert np.allclose(-reflect(c, p1), [-0.348, 0.231, 0.231], atol=1e-12)


def test_zero_direction_rejected():
    with pytest.raises(geo.ZeroDirection):
        par_proj([0.0, 0.0], [1.0, 2.0])


def test_dimension_mismatch_rejected():
    with pytest.raises(geo.DimensionMismatch):
        par_proj([1.0, 0.0, 0.0], [1.0, 2.0])


def test_identity_battery():
    """Projector/reflector identities hold entrywise to 1e-12 when applied
    to random vectors in dimensions 2..6 (2000 draws each)."""
    for n in range(2, 7):
        z = RNG.standard_normal((2000, n))
        z = z[np.linalg.norm(z, axis=1) > 1e-3]
        x = RNG.standard_normal(z.shape)
        par = par_proj(z, x)
        orth = orth_proj(z, x)
        refl = reflect(z, x)
        checks = [
            par_proj(z, z) - z,                   # pi_par(z) z = z
            orth_proj(z, z),                      # pi_perp(z) z = 0
            reflect(z, z) + z,                    # rho(z) z = -z
            orth_proj(z, orth) - orth,            # pi_perp idempotent
            par_proj(z, par) - par,               # pi_par idempotent
            reflect(z, refl) - x,                 # rho involution
            orth_proj(z, par),                    # pi_perp pi_par = 0
            orth + par - x,                       # pi_perp + pi_par = I
            2.0 * orth - refl - x,                # 2 pi_perp - rho = I
            par_proj(z, refl) + par,              # pi_par rho = -pi_par
            orth_proj(z, refl) - orth,            # pi_perp rho = pi_perp
            2.0 * par + refl - x,                 # 2 pi_par + rho = I
        ]
        for i, resid in enumerate(checks):
            assert np.max(np.abs(resid)) < 1e-12, f"identity {i} failed in dim {n}"


def test_pi_theta_limits_and_example():
    z = rand_vec(3, nonzero=True)
    x = rand_vec(3)
    assert np.allclose(pi_theta(z, 0.0, x), orth_proj(z, x), atol=1e-14)
    assert np.allclose(pi_theta(z, math.pi / 2, x), -par_proj(z, x), atol=1e-14)
    assert np.allclose(pi_theta([1.0, 0.0], math.pi / 4, [1.0, 1.0]), [-0.5, 0.5])


def test_pi_theta_definition_and_symmetry():
    for _ in range(200):
        n = int(RNG.integers(2, 7))
        z = rand_vec(n, nonzero=True)
        x, y = rand_vec(n), rand_vec(n)
        theta = float(RNG.uniform(0, math.pi))
        lhs = pi_theta(z, theta, x)
        ref = math.cos(theta) ** 2 * orth_proj(z, x) - math.sin(theta) ** 2 * par_proj(z, x)
        assert np.allclose(lhs, ref, atol=1e-13)
        assert abs(float(x @ pi_theta(z, theta, y)) - float(y @ pi_theta(z, theta, x))) < 1e-12


def test_geodesic_dist():
    assert geodesic_dist([1.0, 0.0], [1.0, 0.0]) == 0.0
    assert geodesic_dist([1.0, 0.0], [0.0, 1.0]) == pytest.approx(math.pi / 2)
    assert geodesic_dist([1.0, 0.0], [-1.0, 0.0]) == pytest.approx(math.pi)
    with pytest.raises(geo.NotUnit):
        geodesic_dist([2.0, 0.0], [1.0, 0.0])


# ---------------------------------------------------------------------------
# regions


def test_ball_margin():
    c = np.array([1.0, 1.0, 1.0])
    assert region_margin(Ball(c, 0.7), c) == pytest.approx(-0.7)
    assert region_contains(Ball(np.zeros(2), 1.0), [1.0, 0.0], tol=0.0)
    assert region_contains(Ball(np.zeros(2), 1.0), [1.0 + 1e-12, 0.0], tol=1e-9)


def test_helmet_margins_derived():
    c = np.array([1.0, 1.0, 1.0])
    helm = Helmet(c, 0.7, 0.8, 0.5)
    c_hat = c / np.linalg.norm(c)
    # on the outer shell on the far side: exactly on the boundary
    assert region_margin(helm, c + 0.8 * c_hat) == pytest.approx(0.0, abs=1e-12)
    # toward the origin the cap is removed: ||x - c/2|| = ||c||/2 - 0.8
    assert region_margin(helm, c - 0.8 * c_hat) == pytest.approx(0.8, abs=1e-12)


def test_helmet_malformed():
    with pytest.raises(geo.MalformedRegion):
        Helmet(np.ones(3), 0.8, 0.7, 0.5)
    with pytest.raises(geo.MalformedRegion):
        Helmet(np.ones(3), 0.7, 0.8, 0.0)


def test_cone_surface_membership():
    c = rand_vec(3)
    v = rand_vec(3, nonzero=True)
    on_axis = c + v
    # the axis point is strictly inside the cone, not on its surface
    assert not region_contains(Cone(c, v, 0.3, cmp="="), on_axis, tol=1e-9)
    assert region_contains(Cone(c, v, 0.0, cmp="="), on_axis, tol=1e-9)
    assert region_contains(Cone(c, v, 0.3, cmp="<="), on_axis, tol=0.0)


def test_cone_margin_equivalence():
    """Quadratic-form margin agrees in sign with the second cone
    characterization cos^2(theta)||v||^2||x-c||^2 <= (v^T(x-c))^2."""
    for _ in range(50):
        n = int(RNG.integers(2, 7))
        c = rand_vec(n)
        v = rand_vec(n, nonzero=True)
        theta = float(RNG.uniform(0.05, math.pi / 2 - 0.05))
        x = c + RNG.standard_normal((200, n))
        q = cone_quadratic(c, v, theta, x)
        t = (x - c) @ v
        second = math.cos(theta) ** 2 * float(v @ v) * np.sum((x - c) ** 2, -1) - t * t
        assert np.allclose(second, float(v @ v) * q, rtol=1e-9, atol=1e-9)
        mask = np.abs(second) > 1e-10
        assert np.array_equal(second[mask] <= 0, q[mask] <= 0)


def test_halfspace_and_line_margins():
    hs = HalfSpace(np.zeros(2), np.array([1.0, 0.0]), cmp="<=")
    assert region_margin(hs, [-2.0, 5.0]) == pytest.approx(-2.0)
    assert region_margin(HalfSpace(np.zeros(2), np.array([1.0, 0.0]), cmp=">="), [-2.0, 5.0]) \
        == pytest.approx(2.0)
    line = Line(np.zeros(3), np.array([1.0, 0.0, 0.0]))
    assert region_margin(line, [7.0, 3.0, 4.0]) == pytest.approx(5.0)
    assert region_margin(line, [7.0, 0.0, 0.0]) == pytest.approx(0.0, abs=1e-12)


def test_halfcone_margin():
    hc = HalfCone(np.zeros(2), np.array([1.0, 0.0]), 0.3, cmp="<=", half="<=")
    assert region_contains(hc, [-1.0, 0.0], tol=1e-12)      # lower nappe axis
    assert not region_contains(hc, [1.0, 0.0], tol=1e-12)   # upper nappe cut off
    assert not region_contains(hc, [0.0, 1.0], tol=1e-12)   # outside the cone


def test_region_margin_empirical_lipschitz():
    """|g(x)-g(y)| <= L ||x-y|| on nearby pairs, with the analytic local L
    per region family (1 for distance-type margins)."""
    c = rand_vec(3)
    v = rand_vec(3, nonzero=True)
    regions = [
        (Ball(c, 0.7), lambda x, y: 1.0),
        (Helmet(np.array([1.0, 1.0, 1.0]), 0.7, 0.9, 0.4), lambda x, y: 1.0),
        (Line(c, v), lambda x, y: 1.0),
        (HalfSpace(c, v), lambda x, y: float(np.linalg.norm(v))),
        (Cone(c, v, 0.4), lambda x, y: np.linalg.norm(x - c) + np.linalg.norm(y - c) + 1e-3),
    ]
    for region, lip in regions:
        for _ in range(200):
            x = c + RNG.standard_normal(3)
            y = x + RNG.uniform(-1e-3, 1e-3, 3)
            gx, gy = region_margin(region, x), region_margin(region, y)
            bound = lip(x, y) * float(np.linalg.norm(x - y)) + 1e-15
            assert abs(gx - gy) <= bound * (1 + 1e-9)


def test_vector_validation():
    with pytest.raises(geo.GeometryError):
        geo.as_vector([1.0, np.nan])
    with pytest.raises(geo.DimensionMismatch):
        geo.as_vector([1.0])
    v = geo.as_vector([1.0, 2.0])
    with pytest.raises(ValueError):
        v[0] = 3.0
