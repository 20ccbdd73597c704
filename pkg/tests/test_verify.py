import math

import numpy as np
import pytest

from helmnav.hybrid_sim import Arc, HybridTrajectory, JumpEvent, SimConfig, simulate
from helmnav.params import ValidatedParams
from helmnav.verify import (
    MismatchedParams,
    PreconditionViolated,
    analytic_v_dot,
    audit_trajectory,
    check_boundary_flow,
    check_jump_cover,
    check_lemma1,
    check_lemma3,
    check_lemma4,
    lyapunov_series,
    lyapunov_value,
    random_feasible_params,
    rejection_sample,
)


def unit(v):
    return np.asarray(v, dtype=float) / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# lemma 1


def test_lemma1_orthogonal_axes_pass():
    for n in range(2, 7):
        v1 = np.zeros(n)
        v1[0] = 1.0
        v2 = np.zeros(n)
        v2[1] = 1.0
        rep = check_lemma1(np.zeros(n), v1, v2, 0.3, 0.3, N=4000, seed=n)
        assert rep.passed
        assert rep.samples_tested == 8000


def test_lemma1_violated_hypothesis_finds_overlap():
    v1 = np.array([1.0, 0.0, 0.0])
    v2 = np.array([0.0, 1.0, 0.0])
    with pytest.raises(PreconditionViolated):
        check_lemma1(np.zeros(3), v1, v2, 0.9, 0.9, N=1000, seed=0)
    rep = check_lemma1(np.zeros(3), v1, v2, 0.9, 0.9, N=4000, seed=0,
                       enforce_precondition=False)
    assert not rep.passed  # cones of half-angle 0.9 at axis angle pi/2 overlap


def test_lemma1_antipodal_axes_infeasible():
    v1 = np.array([1.0, 0.0])
    with pytest.raises(PreconditionViolated):
        check_lemma1(np.zeros(2), v1, -v1, 0.3, 0.3, N=100, seed=0)


# ---------------------------------------------------------------------------
# lemmas 3 and 4, jump cover


def test_lemma3_and_4_reference_params(params_3d):
    assert check_lemma3(params_3d, N=4000, seed=1).passed
    assert check_lemma4(params_3d, N=4000).passed


def test_jump_cover_reference_params(params_3d):
    rep = check_jump_cover(params_3d, N=4000, seed=1)
    assert rep.passed
    assert rep.samples_tested == 4000


def test_jump_cover_fails_with_inverted_hysteresis(params_3d):
    """psi_bar < psi (rejected by validate, forced here) breaks the
    guarantee that post-jump states sit strictly inside the new flow set."""
    P = params_3d
    tampered = ValidatedParams(
        obstacle=P.obstacle, eps_s=P.eps_s, eps_h=P.eps_h, mu=P.mu, theta=P.theta,
        psi=P.psi, psi_bar=0.8 * P.psi, gains=P.gains, mu_min=P.mu_min,
        theta_max=P.theta_max, psi_max=P.psi_max, p1=P.p1, p_minus1=P.p_minus1,
    )
    rep = check_jump_cover(tampered, N=4000, seed=1)
    assert not rep.passed
    assert any(f["check"].startswith("hysteresis") for f in rep.failures)


def test_lemma_checks_across_dimensions():
    for n in range(2, 7):
        for seed in (0, 1):
            P = random_feasible_params(n, seed=37 * n + seed)
            assert check_lemma1(P.c, P.p1 - P.c, P.p_minus1 - P.c,
                                P.psi_bar, P.psi_bar, N=2000, seed=seed).passed
            assert check_lemma3(P, N=2000, seed=seed).passed
            assert check_lemma4(P, N=2000).passed
            assert check_jump_cover(P, N=2000, seed=seed).passed


def test_checks_deterministic_under_seed(params_3d):
    a = check_jump_cover(params_3d, N=1000, seed=5).to_dict()
    b = check_jump_cover(params_3d, N=1000, seed=5).to_dict()
    assert a == b
    assert a["seed"] == 5


# ---------------------------------------------------------------------------
# boundary strata


def test_boundary_flow_reference_params(params_3d):
    rep = check_boundary_flow(params_3d, N=4000, seed=2)
    assert rep.passed, rep.failures[:3]
    assert rep.samples_tested > 3000
    # no stratum should be empty for the reference configuration
    assert not any(v == "empty" for v in rep.notes.values())


def test_boundary_flow_across_dimensions():
    for n in (2, 4, 6):
        P = random_feasible_params(n, seed=91 + n)
        rep = check_boundary_flow(P, N=2000, seed=n)
        assert rep.passed, (n, rep.failures[:3])


# ---------------------------------------------------------------------------
# Lyapunov bookkeeping


def test_lyapunov_values(params_3d):
    assert lyapunov_value(np.zeros(3), 0, params_3d) == 0.0
    assert lyapunov_value(params_3d.p1, 1, params_3d) == pytest.approx(0.5)
    assert lyapunov_value(params_3d.p_minus1, -1, params_3d) == pytest.approx(0.5)


def test_lyapunov_series_decreases_along_flow(params_3d, sim_cfg):
    tr = simulate(3.0 * unit(params_3d.c), 0, params_3d, sim_cfg)
    series = lyapunov_series(tr, params_3d)
    assert len(series) == sum(a.states.shape[0] for a in tr.arcs)
    assert all(s.V >= 0 for s in series)
    # strictly decreasing within each arc
    k = 0
    for arc in tr.arcs:
        vals = [s.V for s in series[k:k + arc.states.shape[0]]]
        assert all(b < a + 1e-9 for a, b in zip(vals, vals[1:]))
        assert vals[-1] < vals[0]
        k += arc.states.shape[0]


def test_lyapunov_differential_check(params_3d, sim_cfg):
    """Finite-difference dV/dt along flow arcs matches the analytic
    directional derivative to first order in h."""
    tr = simulate(3.0 * unit(params_3d.c), 0, params_3d, sim_cfg)
    for arc in tr.arcs:
        if arc.states.shape[0] < 3:
            continue
        v = lyapunov_value(arc.states, arc.mode, params_3d)
        g = analytic_v_dot(arc.states, arc.mode, params_3d)
        dt = np.diff(arc.times)
        fd = np.diff(v) / dt
        curv = np.abs(np.diff(g)) / dt
        err = np.abs(fd - g[:-1])
        assert np.all(err <= 10.0 * dt * np.maximum(curv, 1.0) + 1e-8)


# ---------------------------------------------------------------------------
# trajectory audit


def _fake_traj(P, arcs, reason="converged"):
    return HybridTrajectory(x0=arcs[0].states[0].copy(), m0=arcs[0].mode,
                            params=P, cfg=SimConfig(), arcs=list(arcs),
                            terminal_reason=reason)


def test_audit_passes_on_simulated_batch(params_3d, sim_cfg):
    for x0 in (3.0 * unit(params_3d.c), -2.0 * unit(params_3d.c), np.array([2.9, 0.8, 1.5])):
        tr = simulate(x0, 0, params_3d, sim_cfg)
        rep = audit_trajectory(tr, params_3d)
        assert rep.passed, rep.failures[:3]
        assert rep.notes["jumps"] <= 3


def test_audit_flags_safety_violation(params_3d):
    P = params_3d
    # straight line through the obstacle center: dips far below epsilon
    s = np.linspace(0.0, 1.0, 200)
    states = (1 - s)[:, None] * (3.0 * unit(P.c))
    arc = Arc(mode=0, times=s.copy(), states=states, jump=None)
    rep = audit_trajectory(_fake_traj(P, [arc]), P)
    assert not rep.passed
    assert any(f["check"] == "safety" for f in rep.failures)
    assert rep.notes["min_dist"] < P.epsilon / 2


def test_audit_flags_excess_jumps(params_3d):
    P = params_3d
    far = P.c + np.array([2.0, 0.0, 0.0])
    arcs = []
    t = 0.0
    for k in range(5):
        states = np.array([far + [0.0, 0.1 * k, 0.0], far + [0.0, 0.1 * k, -1e-4]])
        jump = None
        if k < 4:
            mode_next = 1 if k % 2 == 0 else 0
            jump = JumpEvent(t=t + 1.0, from_mode=k % 2, to_mode=mode_next,
                             x=states[-1], ambiguous=False)
        arcs.append(Arc(mode=k % 2, times=np.array([t, t + 1.0]), states=states, jump=jump))
        t += 1.0
    rep = audit_trajectory(_fake_traj(P, arcs), P)
    assert any(f["check"] == "jump_bound" for f in rep.failures)


def test_audit_flags_lyapunov_increase(params_3d):
    P = params_3d
    x0 = P.c + np.array([2.0, 0.0, 0.0])
    states = np.stack([x0, x0 * 1.5, x0 * 2.0])  # V grows
    arc = Arc(mode=0, times=np.array([0.0, 1.0, 2.0]), states=states, jump=None)
    rep = audit_trajectory(_fake_traj(P, [arc]), P)
    assert any(f["check"] == "lyapunov_step" for f in rep.failures)
    assert any(f["check"] == "lyapunov_arc" for f in rep.failures)


def test_audit_rejects_mismatched_params(params_3d, params_2d, sim_cfg):
    tr = simulate(-2.0 * unit(params_3d.c), 0, params_3d, sim_cfg)
    with pytest.raises(MismatchedParams):
        audit_trajectory(tr, params_2d)


# ---------------------------------------------------------------------------
# sampling helpers


def test_rejection_sample_budget_exhaustion():
    pts, used = rejection_sample(lambda x: np.ones(x.shape[0]), np.zeros(2), 1.0,
                                 100, np.random.default_rng(0), max_proposals=10_000)
    assert pts.shape == (0, 2)
    assert used >= 10_000


def test_jump_cover_reports_empty_set(params_3d, monkeypatch):
    """A region that yields no samples is reported as empty, not failed."""
    from helmnav import verify as verify_mod

    def no_samples(margin_fn, center, halfwidth, count, rng, max_proposals=0):
        return np.empty((0, center.shape[0])), 123

    monkeypatch.setattr(verify_mod, "rejection_sample", no_samples)
    rep = check_jump_cover(params_3d, N=10, seed=0)
    assert rep.passed
    assert "empty_stratum" in rep.notes
