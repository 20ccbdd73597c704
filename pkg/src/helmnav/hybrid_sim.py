"""Closed-loop integration on hybrid time domains.

Flow arcs advance with fixed-step classical Runge-Kutta; the end of an arc
is located by bisecting the jump-set margin inside the step that first
lands in the jump set. On the shared flow/jump boundary the simulator
jumps (deterministic, Zeno-free: the hysteresis construction places every
post-jump state strictly inside the next flow set). Jumps keep x and
increment the jump counter; each jump opens a new arc.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .controller import MODES, jump_candidates
from .geometry import as_vector
from .params import ValidatedParams

#: recorded samples may sit below the obstacle radius by at most this factor
SAFETY_SLACK = 1e-6

_BISECT_ITERS = 60


class SimError(RuntimeError):
    pass


class UnsafeStart(SimError):
    pass


class NumericalStall(SimError):
    """Flow/jump membership could not be separated (consecutive jump)."""


@dataclass(frozen=True)
class SimConfig:
    h: float = 1e-3
    t_max: float = 50.0
    goal_tol: float = 1e-3
    event_tol: float = 1e-7
    max_jumps_hard: int = 10

    def __post_init__(self):
        if not (self.h > 0 and self.t_max > 0 and self.goal_tol > 0 and self.event_tol > 0):
            raise ValueError("h, t_max, goal_tol, event_tol must all be positive")
        if self.max_jumps_hard < 1:
            raise ValueError("max_jumps_hard must be >= 1")

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "t_max": self.t_max,
            "goal_tol": self.goal_tol,
            "event_tol": self.event_tol,
            "max_jumps_hard": self.max_jumps_hard,
        }


@dataclass
class HybridState:
    x: np.ndarray
    m: int
    t: float = 0.0
    j: int = 0


@dataclass(frozen=True)
class JumpEvent:
    t: float
    from_mode: int
    to_mode: int
    x: np.ndarray
    ambiguous: bool


@dataclass(frozen=True)
class Arc:
    """One flow interval: mode, sample times, sample states, optional jump."""

    mode: int
    times: np.ndarray
    states: np.ndarray
    jump: JumpEvent | None

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])


@dataclass
class HybridTrajectory:
    x0: np.ndarray
    m0: int
    params: ValidatedParams
    cfg: SimConfig
    arcs: list[Arc] = field(default_factory=list)
    terminal_reason: str = ""

    @property
    def jump_count(self) -> int:
        return sum(1 for a in self.arcs if a.jump is not None)

    @property
    def ambiguity_count(self) -> int:
        return sum(1 for a in self.arcs if a.jump is not None and a.jump.ambiguous)

    @property
    def converged(self) -> bool:
        return self.terminal_reason == "converged"

    @property
    def t_final(self) -> float:
        return float(self.arcs[-1].times[-1]) if self.arcs else 0.0

    @property
    def t_converge(self) -> float | None:
        return self.t_final if self.converged else None

    def min_dist(self) -> float:
        """Smallest recorded distance to the obstacle center."""
        best = math.inf
        c = self.params.c
        for arc in self.arcs:
            d = arc.states - c
            best = min(best, float(np.min(np.sqrt(np.sum(d * d, axis=-1)))))
        return best

    def samples(self):
        """Yield (t, j, m, x) over all arcs; j equals the arc index."""
        for j, arc in enumerate(self.arcs):
            for t, x in zip(arc.times, arc.states):
                yield float(t), j, arc.mode, x


def membership_tol(P: ValidatedParams, cfg: SimConfig) -> float:
    """Event-detection membership threshold, scaled to the scene size."""
    return cfg.event_tol * max(1.0, P.eps_h + P.obstacle.norm_c)


def _make_field(P: ValidatedParams, m: int):
    if m == 0:
        k0 = P.gain(0)

        def f(x):
            return -k0 * x

        return f

    k = P.gain(m)
    c = P.c
    p = P.p(m)

    def f(x):
        d = x - c
        w = x - p
        return -k * (w - (np.dot(d, w) / np.dot(d, d)) * d)

    return f


def _make_jump_margin(P: ValidatedParams, m: int):
    c = P.c
    eps = P.epsilon
    if m == 0:
        eps_s = P.eps_s
        cap_c = 0.5 * c
        cap_r = 0.5 * P.obstacle.norm_c

        def g(x):
            d = x - c
            r = math.sqrt(np.dot(d, d))
            dc = x - cap_c
            return max(eps - r, r - eps_s, cap_r - math.sqrt(np.dot(dc, dc)))

        return g

    eps_h = P.eps_h
    cap_c = P.mu * c
    cap_r = P.mu * P.obstacle.norm_c
    v = P.p(m) - c
    vv = float(np.dot(v, v))
    cos2 = math.cos(P.psi) ** 2

    def g(x):
        d = x - c
        rr = float(np.dot(d, d))
        r = math.sqrt(rr)
        dc = x - cap_c
        helm = max(eps - r, r - eps_h, cap_r - math.sqrt(np.dot(dc, dc)))
        t = float(np.dot(v, d))
        lower_half_cone = max(cos2 * rr - t * t / vv, t)
        return max(eps - r, min(-helm, lower_half_cone))

    return g


def _rk4(f, x: np.ndarray, h: float) -> np.ndarray:
    k1 = f(x)
    k2 = f(x + (0.5 * h) * k1)
    k3 = f(x + (0.5 * h) * k2)
    k4 = f(x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def rk4_flow_step(s: HybridState, h: float, P: ValidatedParams) -> np.ndarray:
    """One classical Runge-Kutta advance of the mode-s.m flow from s.x."""
    return _rk4(_make_field(P, s.m), np.asarray(s.x, dtype=float), h)


def _bisect_event(f, g, x0: np.ndarray, h: float, tol: float):
    """First crossing of g <= tol inside (0, h], given g(x0) > tol and
    g(x(h)) <= tol. Probes integrate a single partial step from x0."""
    lo = 0.0
    hi = h
    x_hi = _rk4(f, x0, h)
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        x_mid = _rk4(f, x0, mid)
        if g(x_mid) <= tol:
            hi, x_hi = mid, x_mid
        else:
            lo = mid
    return hi, x_hi


def locate_event(s: HybridState, h: float, P: ValidatedParams,
                 event_tol: float = SimConfig().event_tol):
    """Earliest jump-set crossing within one step, or None.

    Returns (t_hit, x_hit) with the jump-set margin at x_hit within the
    membership tolerance; a start already on the boundary reports the event
    at t_hit = s.t. Thin jump-set slivers crossed entirely inside one step
    are invisible; the sets built here are fat relative to any sane h.
    """
    g = _make_jump_margin(P, s.m)
    x0 = np.asarray(s.x, dtype=float)
    tol = event_tol * max(1.0, P.eps_h + P.obstacle.norm_c)
    if g(x0) <= tol:
        return s.t, x0.copy()
    f = _make_field(P, s.m)
    if g(_rk4(f, x0, h)) > tol:
        return None
    tau, x_hit = _bisect_event(f, g, x0, h, tol)
    return s.t + tau, x_hit


def simulate(x0, m0: int, P: ValidatedParams, cfg: SimConfig = SimConfig()) -> HybridTrajectory:
    """Run the closed loop from (x0, m0) until goal, t_max, or the hard
    jump guard; returns the recorded hybrid trajectory.

    Raises UnsafeStart when x0 is inside the obstacle and NumericalStall if
    a jump lands back in a jump set with no flow in between (the hysteresis
    construction makes that a numerical failure, not a modeling outcome).
    """
    if m0 not in MODES:
        raise SimError(f"mode must be one of {MODES}, got {m0!r}")
    x = np.array(as_vector(x0, P.n))
    if float(np.linalg.norm(x - P.c)) < P.epsilon:
        raise UnsafeStart(f"initial distance {float(np.linalg.norm(x - P.c))} < {P.epsilon}")

    tol = membership_tol(P, cfg)
    traj = HybridTrajectory(x0=x.copy(), m0=m0, params=P, cfg=cfg)
    t = 0.0
    m = m0
    arc_after_jump = False

    while True:
        f = _make_field(P, m)
        g = _make_jump_margin(P, m)
        times = [t]
        states = [x.copy()]
        jump_ev = None
        terminal = None
        flowed = False

        while True:
            if float(np.linalg.norm(x)) <= cfg.goal_tol:
                terminal = "converged"
                break
            if t >= cfg.t_max - 1e-12:
                terminal = "t_max"
                break
            if g(x) <= tol:
                if arc_after_jump and not flowed:
                    raise NumericalStall(
                        f"post-jump state is still in the jump set at t={t} (mode {m})"
                    )
                target = jump_candidates(x, P) if m == 0 else [0]
                jump_ev = JumpEvent(
                    t=t, from_mode=m, to_mode=target[0], x=x.copy(),
                    ambiguous=len(target) > 1,
                )
                break
            h_step = min(cfg.h, cfg.t_max - t)
            x_next = _rk4(f, x, h_step)
            if g(x_next) <= tol:
                tau, x_next = _bisect_event(f, g, x, h_step, tol)
                t += tau
            else:
                t += h_step
            x = x_next
            times.append(t)
            states.append(x.copy())
            flowed = True

        traj.arcs.append(Arc(mode=m, times=np.array(times), states=np.array(states), jump=jump_ev))

        if terminal is not None:
            traj.terminal_reason = terminal
            return traj
        m = jump_ev.to_mode
        arc_after_jump = True
        if traj.jump_count >= cfg.max_jumps_hard:
            traj.terminal_reason = "max_jumps_exceeded"
            return traj


def _run_one(args):
    x0, m0, P, cfg = args
    try:
        return simulate(x0, m0, P, cfg)
    except SimError as exc:
        failed = HybridTrajectory(
            x0=np.array(as_vector(x0)), m0=m0, params=P, cfg=cfg,
            terminal_reason=f"error:{type(exc).__name__}:{exc}",
        )
        return failed


def batch_simulate(inits, P: ValidatedParams, cfg: SimConfig = SimConfig(),
                   parallel: int = 1) -> list[HybridTrajectory]:
    """Independent runs for each (x0, m0); order-preserving.

    Per-run failures are captured as trajectories with an ``error:...``
    terminal reason so a batch never aborts early.
    """
    jobs = [(x0, m0, P, cfg) for x0, m0 in inits]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(job) for job in jobs]
