"""Machine-checkable forms of the controller's guarantees.

Each check samples a region or a trajectory and asserts inequalities that
the construction promises: cone disjointness, equilibria only on the axis
line, the avoidance flow set avoiding that line, the jump map always
having a target that lands strictly inside the next flow set, sign
conditions of the closed-loop field on every boundary stratum, and
energy/safety/jump-count audits of simulated runs.

Checks are deterministic given a seed and report witnesses, not just a
boolean: a failing sample is recorded with its margins so a geometry bug
is diagnosable from the report alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .controller import flow_margin, jump_margin, kappa
from .geometry import cone_quadratic, orth_proj
from .hybrid_sim import HybridTrajectory
from .params import ObstacleSpec, RawParams, ValidatedParams, mu_min, psi_max, theta_max, validate

MAX_WITNESSES = 25

#: interior collar for rejection sampling of strict-inequality strata
STRICT_COLLAR = 1e-9


class VerifyError(ValueError):
    pass


class PreconditionViolated(VerifyError):
    pass


class MismatchedParams(VerifyError):
    pass


@dataclass
class PropertyReport:
    name: str
    samples_tested: int = 0
    failures: list[dict] = field(default_factory=list)
    failure_count: int = 0
    worst_margin: float | None = None
    seed: int | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def record_failure(self, witness: dict):
        self.failure_count += 1
        if len(self.failures) < MAX_WITNESSES:
            self.failures.append(witness)

    def track_margin(self, value: float):
        if self.worst_margin is None or value < self.worst_margin:
            self.worst_margin = float(value)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "samples_tested": self.samples_tested,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "worst_margin": self.worst_margin,
            "seed": self.seed,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class LyapunovSample:
    t: float
    m: int
    V: float


def lyapunov_value(x, m: int, P: ValidatedParams) -> float | np.ndarray:
    """V(x, m) = m^2/2 + ||x - p_m||^2/2 with p_0 = 0."""
    x = np.asarray(x, dtype=float)
    p = np.zeros(P.n) if m == 0 else P.p(m)
    d = x - p
    v = 0.5 * m * m + 0.5 * np.sum(d * d, axis=-1)
    return float(v) if np.ndim(v) == 0 else v


def lyapunov_series(traj: HybridTrajectory, P: ValidatedParams) -> list[LyapunovSample]:
    out = []
    for arc in traj.arcs:
        v = lyapunov_value(arc.states, arc.mode, P)
        out.extend(LyapunovSample(float(t), arc.mode, float(val)) for t, val in zip(arc.times, v))
    return out


def analytic_v_dot(x, m: int, P: ValidatedParams) -> float | np.ndarray:
    """<grad V, kappa>: -k0*||x||^2 in mode 0, else -k_m*||pi_perp(x-c)(x-p_m)||^2."""
    x = np.asarray(x, dtype=float)
    if m == 0:
        g = -P.gain(0) * np.sum(x * x, axis=-1)
    else:
        w = orth_proj(x - P.c, x - P.p(m))
        g = -P.gain(m) * np.sum(w * w, axis=-1)
    return float(g) if np.ndim(g) == 0 else g


# ---------------------------------------------------------------------------
# samplers


def unit_sphere(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    g = rng.standard_normal((count, n))
    norms = np.linalg.norm(g, axis=-1, keepdims=True)
    norms[norms < 1e-12] = 1.0
    return g / norms


def unit_perp(rng: np.random.Generator, count: int, axis_hat: np.ndarray) -> np.ndarray:
    """Random unit vectors orthogonal to axis_hat."""
    n = axis_hat.shape[0]
    g = rng.standard_normal((count, n))
    w = g - (g @ axis_hat)[:, None] * axis_hat
    norms = np.linalg.norm(w, axis=-1, keepdims=True)
    bad = norms[:, 0] < 1e-9
    if np.any(bad):
        w[bad] = unit_perp(rng, int(np.sum(bad)), axis_hat)
        norms = np.linalg.norm(w, axis=-1, keepdims=True)
    return w / norms


def cap_directions(rng: np.random.Generator, count: int, axis_hat: np.ndarray,
                   alpha: float) -> np.ndarray:
    """Unit vectors within angle alpha of axis_hat (angle-uniform)."""
    phi = alpha * rng.random(count)
    w = unit_perp(rng, count, axis_hat)
    return np.cos(phi)[:, None] * axis_hat + np.sin(phi)[:, None] * w


def sample_cone_region(c: np.ndarray, v: np.ndarray, psi: float, radius: float,
                       count: int, rng: np.random.Generator) -> np.ndarray:
    """Points of the solid double cone C<=(c, v, psi) within ``radius`` of c,
    both nappes, excluding the vertex."""
    v_hat = v / float(np.linalg.norm(v))
    signs = rng.integers(0, 2, count) * 2 - 1
    u = cap_directions(rng, count, v_hat, psi) * signs[:, None]
    r = radius * np.maximum(rng.random(count) ** (1.0 / c.shape[0]), 1e-9)
    return c + r[:, None] * u


def rejection_sample(margin_fn, center: np.ndarray, halfwidth: float, count: int,
                     rng: np.random.Generator, max_proposals: int = 20_000_000):
    """Uniform box proposals around ``center`` filtered by margin <= 0.

    Returns (points, proposals_used); may return fewer than ``count`` points
    when the budget runs out (caller decides whether that is a failure).
    """
    n = center.shape[0]
    got: list[np.ndarray] = []
    total = 0
    used = 0
    batch = max(4096, min(count * 4, 200_000))
    while total < count and used < max_proposals:
        pts = center + rng.uniform(-halfwidth, halfwidth, size=(batch, n))
        used += batch
        keep = pts[np.asarray(margin_fn(pts)) <= 0.0]
        if keep.shape[0]:
            got.append(keep)
            total += keep.shape[0]
    if not got:
        return np.empty((0, n)), used
    return np.concatenate(got, axis=0)[:count], used


# ---------------------------------------------------------------------------
# lemma-level checks


def check_lemma1(c, v1, v2, psi1: float, psi2: float, N: int = 10_000,
                 seed: int = 0, enforce_precondition: bool = True) -> PropertyReport:
    """Cone disjointness: C<=(c,v1,psi1) and C<=(c,v2,psi2) meet only at c
    whenever the axis angle lies in (psi1+psi2, pi-(psi1+psi2)).

    With ``enforce_precondition=False`` the sampling runs anyway, which is
    how a violated hypothesis is shown to produce overlap witnesses.
    """
    c = np.asarray(c, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    v1_hat = v1 / np.linalg.norm(v1)
    v2_hat = v2 / np.linalg.norm(v2)
    angle = math.acos(min(1.0, max(-1.0, float(v1_hat @ v2_hat))))
    if enforce_precondition and not psi1 + psi2 < angle < math.pi - (psi1 + psi2):
        raise PreconditionViolated(
            f"axis angle {angle} not in ({psi1 + psi2}, {math.pi - (psi1 + psi2)})"
        )
    rng = np.random.default_rng(seed)
    report = PropertyReport(name="lemma1_cone_disjointness", seed=seed,
                            notes={"axis_angle": angle})
    radius = 2.0 * (1.0 + float(np.linalg.norm(c)))
    for va, pa, vb, pb, tag in ((v1, psi1, v2, psi2, "cone1_in_cone2"),
                                (v2, psi2, v1, psi1, "cone2_in_cone1")):
        pts = sample_cone_region(c, va, pa, radius, N, rng)
        other = cone_quadratic(c, vb, pb, pts)
        report.samples_tested += pts.shape[0]
        for q in other:
            report.track_margin(float(q))
        for idx in np.nonzero(other <= 0.0)[0]:
            report.record_failure({
                "check": tag, "x": pts[idx].tolist(), "other_margin": float(other[idx]),
            })
    return report


def check_lemma3(P: ValidatedParams, N: int = 10_000, seed: int = 0) -> PropertyReport:
    """Avoidance equilibria are exactly the axis line through c and p_m.

    Forward: on the line the feedback vanishes to round-off. Converse: off
    the line, ||kappa|| equals k_m*||p_m - c||*d/||x - c|| (d the distance
    to the line), so it is bounded away from zero in proportion to d.
    """
    rng = np.random.default_rng(seed)
    report = PropertyReport(name="lemma3_equilibria", seed=seed)
    half = N // 2
    for m in (1, -1):
        v = P.p(m) - P.c
        lam = np.concatenate([np.linspace(-2.0, -1e-6, half // 2),
                              np.linspace(1e-6, 2.0, half - half // 2)])
        on_line = P.c + lam[:, None] * v
        u = kappa(on_line, m, P)
        norms = np.linalg.norm(u, axis=-1)
        scale = P.gain(m) * (np.linalg.norm(on_line - P.c, axis=-1) + np.linalg.norm(v))
        report.samples_tested += on_line.shape[0]
        for idx in np.nonzero(norms > 1e-10 * scale)[0]:
            report.record_failure({
                "check": f"line_m{m}", "x": on_line[idx].tolist(),
                "kappa_norm": float(norms[idx]),
            })

        box = 2.0 * (P.eps_h + P.obstacle.norm_c)
        pts = P.c + rng.uniform(-box, box, size=(half, P.n))
        d_line = np.linalg.norm(orth_proj(v, pts - P.c), axis=-1)
        r = np.linalg.norm(pts - P.c, axis=-1)
        keep = (d_line >= 1e-3) & (r >= 1e-9)
        pts, d_line, r = pts[keep], d_line[keep], r[keep]
        u = kappa(pts, m, P)
        norms = np.linalg.norm(u, axis=-1)
        theory = P.gain(m) * float(np.linalg.norm(v)) * d_line / r
        report.samples_tested += pts.shape[0]
        rel = np.abs(norms - theory) / theory
        for val in norms - 0.9 * theory:
            report.track_margin(float(val))
        for idx in np.nonzero((norms < 0.9 * theory) | (rel > 1e-9))[0]:
            report.record_failure({
                "check": f"offline_m{m}", "x": pts[idx].tolist(),
                "kappa_norm": float(norms[idx]), "theory": float(theory[idx]),
            })
    return report


def check_lemma4(P: ValidatedParams, N: int = 10_000) -> PropertyReport:
    """The avoidance flow set never meets the axis line through c and p_m."""
    report = PropertyReport(name="lemma4_flow_set_avoids_axis")
    for m in (1, -1):
        v = P.p(m) - P.c
        v_hat = v / float(np.linalg.norm(v))
        s = np.linspace(-2.0 * P.eps_h, 2.0 * P.eps_h, N // 2)
        pts = P.c + s[:, None] * v_hat
        g = flow_margin(pts, m, P)
        report.samples_tested += pts.shape[0]
        for val in g:
            report.track_margin(float(val))
        for idx in np.nonzero(g <= 1e-9)[0]:
            report.record_failure({
                "check": f"axis_m{m}", "x": pts[idx].tolist(), "flow_margin": float(g[idx]),
            })
    return report


def _clearances(x: np.ndarray, P: ValidatedParams) -> dict[int, np.ndarray]:
    u = x - P.c
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    out = {}
    for m in (1, -1):
        v = P.p(m) - P.c
        v_hat = v / float(np.linalg.norm(v))
        out[m] = np.arccos(np.clip(np.abs(u @ v_hat), -1.0, 1.0))
    return out


def check_jump_cover(P: ValidatedParams, N: int = 10_000, seed: int = 0) -> PropertyReport:
    """Every point of the mode-0 jump set admits a switching target, and
    every admissible target lands in its flow set but outside its jump set
    (the hysteresis that forbids consecutive jumps).

    The guarantee is set-valued: any selection must be safe, so each
    admissible mode is checked, not only the deterministic pick. This is
    what catches a tampered psi_bar <= psi, which the max-clearance
    tie-break alone would mask.
    """
    rng = np.random.default_rng(seed)
    report = PropertyReport(name="jump_cover_and_hysteresis", seed=seed)
    pts, used = rejection_sample(lambda x: jump_margin(x, 0, P), P.c, P.eps_s, N, rng)
    report.notes["proposals_used"] = used
    if pts.shape[0] == 0:
        report.notes["empty_stratum"] = "jump set J0 produced no samples"
        return report
    cl = _clearances(pts, P)
    feasible = {m: cl[m] >= P.psi_bar - 1e-9 for m in (1, -1)}
    report.samples_tested = pts.shape[0]

    for val in np.maximum(cl[1], cl[-1]) - P.psi_bar:
        report.track_margin(float(val))
    for idx in np.nonzero(~(feasible[1] | feasible[-1]))[0]:
        report.record_failure({
            "check": "cover", "x": pts[idx].tolist(),
            "clearances": [float(cl[1][idx]), float(cl[-1][idx])],
        })

    for m in (1, -1):
        sel = pts[feasible[m]]
        if sel.shape[0] == 0:
            continue
        g_flow = flow_margin(sel, m, P)
        g_jump = jump_margin(sel, m, P)
        for idx in np.nonzero(~((g_flow <= 1e-9) & (g_jump > 1e-9)))[0]:
            report.record_failure({
                "check": f"hysteresis_m{m}", "x": sel[idx].tolist(),
                "flow_margin": float(g_flow[idx]), "jump_margin": float(g_jump[idx]),
            })
    return report


# ---------------------------------------------------------------------------
# boundary strata


def _sphere_with(rng, count, center, radius, accept_dir):
    """Directions filtered by accept_dir(u_hat); returns points on the sphere."""
    got = []
    total = 0
    for _ in range(200):
        u = unit_sphere(rng, max(count, 2048), center.shape[0])
        u = u[accept_dir(u)]
        if u.shape[0]:
            got.append(u)
            total += u.shape[0]
        if total >= count:
            break
    if not got:
        return np.empty((0, center.shape[0]))
    return center + radius * np.concatenate(got)[:count]


def _ring_points(rng, count, center, radius, axis_hat, axial_cos):
    """Points x = center + radius*u with u . axis_hat = axial_cos exactly."""
    if abs(axial_cos) > 1.0:
        return np.empty((0, center.shape[0]))
    s = unit_perp(rng, count, axis_hat)
    u = axial_cos * axis_hat + math.sqrt(max(0.0, 1.0 - axial_cos**2)) * s
    return center + radius * u


def _lower_cone_points(rng, count, P, m, r_lo, r_hi):
    """Points on the lower nappe of the psi-cone around p_m - c at radii
    drawn from (r_lo, r_hi)."""
    v = P.p(m) - P.c
    v_hat = v / float(np.linalg.norm(v))
    s = unit_perp(rng, count, v_hat)
    u = -math.cos(P.psi) * v_hat + math.sin(P.psi) * s
    r = rng.uniform(r_lo + 1e-9, r_hi - 1e-9, count)
    return P.c + r[:, None] * u


def check_boundary_flow(P: ValidatedParams, N: int = 10_000, seed: int = 0) -> PropertyReport:
    """Sign conditions of the closed-loop field on each boundary stratum of
    the flow sets (the viability table, numerically).

    Strata are sampled either by filtered directions (open faces, kept a
    small collar inside their defining strict inequalities) or exactly (the
    codimension-2 corner rings and the cone faces). A stratum that yields
    no samples is recorded in notes as empty rather than failed.
    """
    rng = np.random.default_rng(seed)
    report = PropertyReport(name="boundary_flow_signs", seed=seed)
    c = P.c
    nc = P.obstacle.norm_c
    c_hat = c / nc
    eps, eps_s, eps_h, mu = P.epsilon, P.eps_s, P.eps_h, P.mu
    per = max(64, N // 21)  # 21 strata runs share the sample budget
    tiny = 1e-12

    def run(tag, pts, conditions):
        """conditions: list of (label, values, kind, scale) with kind in
        {'pos', 'neg', 'zero', 'nonneg', 'nonpos'}."""
        if pts.shape[0] == 0:
            report.notes[tag] = "empty"
            return
        report.samples_tested += pts.shape[0]
        for label, vals, kind, scale in conditions:
            if kind == "pos":
                margin = vals
            elif kind == "neg":
                margin = -vals
            elif kind == "zero":
                margin = scale * tiny - np.abs(vals)
            elif kind == "nonneg":
                margin = vals + scale * tiny
            else:  # nonpos
                margin = -vals + scale * tiny
            for v in margin:
                report.track_margin(float(v))
            for idx in np.nonzero(margin < 0.0)[0]:
                report.record_failure({
                    "stratum": tag, "condition": label, "x": pts[idx].tolist(),
                    "value": float(vals[idx]),
                })

    # --- stabilization mode -------------------------------------------------
    thales_c, thales_r = 0.5 * c, 0.5 * nc

    pts = _sphere_with(rng, per, c, eps,
                       lambda u: u @ c_hat < -eps / nc - STRICT_COLLAR)
    u0 = kappa(pts, 0, P) if pts.shape[0] else pts
    run("inner_shell_inside_cap", pts,
        [("(x-c).k > 0", np.sum((pts - c) * u0, -1), "pos", 1.0)])

    pts = _sphere_with(rng, per, c, eps_s,
                       lambda u: u @ c_hat > -eps_s / nc + STRICT_COLLAR)
    u0 = kappa(pts, 0, P) if pts.shape[0] else pts
    run("outer_shell_exit_face", pts,
        [("(x-c).k < 0", np.sum((pts - c) * u0, -1), "neg", 1.0)])

    def in_band(u):
        x = thales_c + thales_r * u
        r = np.linalg.norm(x - c, axis=-1)
        return (r > eps + STRICT_COLLAR) & (r < eps_s - STRICT_COLLAR)

    pts = _sphere_with(rng, per, thales_c, thales_r, in_band)
    u0 = kappa(pts, 0, P) if pts.shape[0] else pts
    run("cap_face_mode0", pts,
        [("(x-c/2).k < 0", np.sum((pts - thales_c) * u0, -1), "neg", 1.0)])

    for tag, radius in (("corner_inner_cap", eps), ("corner_outer_cap", eps_s)):
        # on both spheres: u.c_hat fixed by ||x-c||=radius and ||x-c/2||=||c/2||
        pts = _ring_points(rng, per, c, radius, c_hat, -radius / nc)
        u0 = kappa(pts, 0, P) if pts.shape[0] else pts
        sc = P.gain(0) * (nc + radius) * radius
        run(tag, pts, [
            ("(x-c).k = 0", np.sum((pts - c) * u0, -1), "zero", sc),
            ("(x-c/2).k <= 0", np.sum((pts - thales_c) * u0, -1), "nonpos", sc),
        ])

    # --- avoidance modes ----------------------------------------------------
    for m in (1, -1):
        v = P.p(m) - c
        nv = float(np.linalg.norm(v))
        cap_c, cap_r = mu * c, mu * nc

        def outside_cap_and_cone(u, radius):
            x = c + radius * u
            far = np.linalg.norm(x - cap_c, axis=-1) > cap_r + STRICT_COLLAR
            q = cone_quadratic(c, v, P.psi, x)
            return far & (q > STRICT_COLLAR)

        for tag, radius in ((f"shell_inner_m{m}", eps), (f"shell_outer_m{m}", eps_h)):
            pts = _sphere_with(rng, per, c, radius,
                               lambda u, radius=radius: outside_cap_and_cone(u, radius))
            um = kappa(pts, m, P) if pts.shape[0] else pts
            sc = P.gain(m) * (radius + nv + nc) * radius
            run(tag, pts, [("(x-c).k = 0", np.sum((pts - c) * um, -1), "zero", sc)])

        def in_shell(u):
            x = cap_c + cap_r * u
            r = np.linalg.norm(x - c, axis=-1)
            return (r > eps + STRICT_COLLAR) & (r < eps_h - STRICT_COLLAR)

        pts = _sphere_with(rng, per, cap_c, cap_r, in_shell)
        um = kappa(pts, m, P) if pts.shape[0] else pts
        run(f"cap_exit_face_m{m}", pts,
            [("(x-mu c).k < 0", np.sum((pts - cap_c) * um, -1), "neg", 1.0)])

        pts = _lower_cone_points(rng, per, P, m, eps, eps_h)
        um = kappa(pts, m, P)
        normals = pi_psi_normal(P, m, pts)
        sc = P.gain(m) * (eps_h + nv) * eps_h
        run(f"cone_face_m{m}", pts,
            [("n_m.k >= 0", np.sum(normals * um, -1), "nonneg", sc)])

        v_hat = v / nv
        for tag, radius in ((f"corner_shell_cap_inner_m{m}", eps),
                            (f"corner_shell_cap_outer_m{m}", eps_h)):
            # ||x-c|| = radius and ||x - mu c|| = mu||c|| pin the axial component
            t_ax = -((1.0 - 2.0 * mu) * nc * nc + radius * radius) / (2.0 * (1.0 - mu) * radius * nc)
            pts = _ring_points(rng, per, c, radius, c_hat, t_ax)
            if pts.shape[0]:
                um = kappa(pts, m, P)
                sc = P.gain(m) * (radius + nv + nc) * radius
                run(tag, pts, [
                    ("(x-c).k = 0", np.sum((pts - c) * um, -1), "zero", sc),
                    ("(x-mu c).k < 0", np.sum((pts - cap_c) * um, -1), "neg", 1.0),
                ])
            else:
                report.notes[tag] = "empty"

        for tag, radius in ((f"corner_shell_cone_inner_m{m}", eps),
                            (f"corner_shell_cone_outer_m{m}", eps_h)):
            s_perp = unit_perp(rng, per, v_hat)
            u_dir = -math.cos(P.psi) * v_hat + math.sin(P.psi) * s_perp
            pts = c + radius * u_dir
            um = kappa(pts, m, P)
            normals = pi_psi_normal(P, m, pts)
            sc = P.gain(m) * (radius + nv + nc) * radius
            run(tag, pts, [
                ("(x-c).k = 0", np.sum((pts - c) * um, -1), "zero", sc),
                ("n_m.k >= 0", np.sum(normals * um, -1), "nonneg", sc),
            ])
    return report


def pi_psi_normal(P: ValidatedParams, m: int, x) -> np.ndarray:
    """Outward-pointing normal pi^psi(p_m - c)(x - c) of the switching cone."""
    v = P.p(m) - P.c
    u = np.asarray(x, dtype=float) - P.c
    c2 = math.cos(P.psi) ** 2
    s2 = math.sin(P.psi) ** 2
    par = (np.sum(v * u, axis=-1) / float(np.dot(v, v)))[..., None] * v
    return c2 * (u - par) - s2 * par


# ---------------------------------------------------------------------------
# trajectory audit


def drift_bound(h: float, duration: float) -> float:
    # empirical order-4 envelope with a generous constant; the halving test
    # in the acceptance suite is the sharp order check
    return 1e-8 + 100.0 * h**4 * max(duration, h)


def audit_trajectory(traj: HybridTrajectory, P: ValidatedParams) -> PropertyReport:
    """Safety, jump-count, Lyapunov-monotonicity, and avoidance-radius-drift
    audit of one simulated trajectory.

    V is required to decrease strictly over each flow arc and not increase
    per step beyond round-off; nothing is asserted about V across jumps
    (switching can raise it; the stability argument does not need jump
    monotonicity).
    """
    if not traj.params.equals(P):
        raise MismatchedParams("trajectory was produced with different parameters")
    report = PropertyReport(name="trajectory_audit")
    eps_floor = P.epsilon * (1.0 - 1e-6)

    for j, arc in enumerate(traj.arcs):
        d = np.linalg.norm(arc.states - P.c, axis=-1)
        report.samples_tested += arc.states.shape[0]
        for idx in np.nonzero(d < eps_floor)[0]:
            report.record_failure({
                "check": "safety", "arc": j, "t": float(arc.times[idx]),
                "dist": float(d[idx]),
            })
        report.track_margin(float(np.min(d) - eps_floor))

        if arc.states.shape[0] >= 2:
            v = lyapunov_value(arc.states, arc.mode, P)
            steps_up = np.nonzero(np.diff(v) > 1e-9)[0]
            for idx in steps_up:
                report.record_failure({
                    "check": "lyapunov_step", "arc": j, "t": float(arc.times[idx]),
                    "dV": float(v[idx + 1] - v[idx]),
                })
            path_len = float(np.sum(np.linalg.norm(np.diff(arc.states, axis=0), axis=-1)))
            if not v[-1] < v[0] - 1e-12 * path_len:
                report.record_failure({
                    "check": "lyapunov_arc", "arc": j,
                    "V_start": float(v[0]), "V_end": float(v[-1]),
                })

            if arc.mode != 0:
                drift = float(np.max(d) - np.min(d))
                bound = drift_bound(traj.cfg.h, arc.duration)
                if drift > bound:
                    report.record_failure({
                        "check": "radius_drift", "arc": j, "drift": drift, "bound": bound,
                    })

    if traj.jump_count > 3:
        report.record_failure({"check": "jump_bound", "jumps": traj.jump_count})
    report.notes.update({
        "jumps": traj.jump_count,
        "min_dist": traj.min_dist(),
        "terminal_reason": traj.terminal_reason,
    })
    return report


# ---------------------------------------------------------------------------
# randomized feasible configurations (dimension sweeps)


def random_feasible_params(n: int, seed: int = 0, gain: float = 1.0) -> ValidatedParams:
    """Assumption-satisfying parameter draw in dimension n (deterministic)."""
    rng = np.random.default_rng(seed)
    c_dir = unit_sphere(rng, 1, n)[0]
    c = float(rng.uniform(1.2, 2.5)) * c_dir
    obs = ObstacleSpec(c=c, epsilon=float(rng.uniform(0.25, 0.45)) * float(np.linalg.norm(c)))
    lo, hi = obs.epsilon, math.sqrt(obs.epsilon * obs.norm_c)
    eps_h = lo + float(rng.uniform(0.35, 0.65)) * (hi - lo)
    eps_s = obs.epsilon + float(rng.uniform(0.3, 0.7)) * (eps_h - obs.epsilon)
    m_lo = mu_min(obs, eps_h)
    mu = m_lo + float(rng.uniform(0.3, 0.7)) * (0.5 - m_lo)
    t_hi = theta_max(obs, eps_h, mu)
    theta = float(rng.uniform(0.3, 0.7)) * t_hi
    p_hi = psi_max(theta)
    psi = float(rng.uniform(0.3, 0.5)) * p_hi
    psi_bar = float(rng.uniform(0.6, 0.8)) * p_hi
    w = rng.standard_normal(n)
    raw = RawParams(obstacle=obs, eps_s=eps_s, eps_h=eps_h, mu=mu, theta=theta,
                    psi=psi, psi_bar=psi_bar, gains=(gain, gain, gain), w_hint=w)
    return validate(raw)
