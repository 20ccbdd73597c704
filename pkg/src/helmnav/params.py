"""Controller parameterization: feasibility bounds, auxiliary points, validation.

The admissible intervals form a chain and are checked in dependency order:
eps_h, eps_s, then mu (against mu_min), theta (against theta_max), finally
psi and psi_bar (against psi_max). ``validate`` evaluates every constraint
whose prerequisites hold and reports the full list of violations at once,
so parameter sweeps stay diagnosable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import as_vector, cone_quadratic, orth_proj, reflect


class ParamsError(ValueError):
    pass


class InfeasibleObstacle(ParamsError):
    pass


class InfeasibleEpsH(ParamsError):
    pass


class InfeasibleMu(ParamsError):
    pass


class InfeasibleTheta(ParamsError):
    pass


class InternalInfeasibility(ParamsError):
    pass


class ZeroCenter(ParamsError):
    pass


class DegenerateHint(ParamsError):
    pass


@dataclass(frozen=True)
class Violation:
    constraint: str
    actual: float
    allowed: str

    def __str__(self):
        return f"{self.constraint}: {self.actual!r} not in {self.allowed}"


class ValidationFailure(ParamsError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True, eq=False)
class ObstacleSpec:
    """Forbidden ball: center c, radius epsilon, with ||c|| > epsilon > 0."""

    c: np.ndarray
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "c", as_vector(self.c))
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise InfeasibleObstacle(f"epsilon must be positive, got {self.epsilon}")
        if not self.norm_c > self.epsilon:
            raise InfeasibleObstacle(
                f"reference position lies too close: need ||c|| > epsilon, got "
                f"||c||={self.norm_c} <= {self.epsilon}"
            )

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def norm_c(self) -> float:
        return float(np.linalg.norm(self.c))


@dataclass(frozen=True, eq=False)
class RawParams:
    obstacle: ObstacleSpec
    eps_s: float
    eps_h: float
    mu: float
    theta: float
    psi: float
    psi_bar: float
    gains: tuple[float, float, float]  # (k_{-1}, k_0, k_{+1})
    w_hint: np.ndarray | None = None

    def __post_init__(self):
        scalars = (self.eps_s, self.eps_h, self.mu, self.theta, self.psi, self.psi_bar)
        if not all(math.isfinite(v) for v in scalars):
            raise ParamsError("all parameters must be finite")
        if len(self.gains) != 3 or not all(math.isfinite(k) and k > 0 for k in self.gains):
            raise ParamsError(f"gains must be three positive reals, got {self.gains}")
        object.__setattr__(self, "gains", tuple(float(k) for k in self.gains))
        if self.w_hint is not None:
            object.__setattr__(self, "w_hint", as_vector(self.w_hint, self.obstacle.n))


def eps_h_interval(obs: ObstacleSpec) -> tuple[float, float]:
    return obs.epsilon, math.sqrt(obs.epsilon * obs.norm_c)


def mu_min(obs: ObstacleSpec, eps_h: float) -> float:
    """Lower bound of the admissible cap parameter interval (mu_min, 1/2)."""
    lo, hi = eps_h_interval(obs)
    if not lo < eps_h < hi:
        raise InfeasibleEpsH(f"eps_h={eps_h} outside ({lo}, {hi})")
    nc = obs.norm_c
    return 0.5 * (eps_h**2 + nc**2 - 2.0 * obs.epsilon * nc) / (nc**2 - obs.epsilon * nc)


def theta_max(obs: ObstacleSpec, eps_h: float, mu: float) -> float:
    """Largest admissible cone half-angle for the auxiliary points."""
    lo = mu_min(obs, eps_h)
    if not lo < mu < 0.5:
        raise InfeasibleMu(f"mu={mu} outside ({lo}, 0.5)")
    nc = obs.norm_c
    arg = (eps_h**2 + nc**2 * (1.0 - 2.0 * mu)) / (2.0 * obs.epsilon * nc * (1.0 - mu))
    if not -1.0 - 1e-12 <= arg <= 1.0 + 1e-12:
        raise InternalInfeasibility(f"arccos argument {arg} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, arg)))


def psi_max(theta: float) -> float:
    """min(theta, pi/2 - theta); the shared cap on psi and psi_bar."""
    if not 0.0 < theta < math.pi / 2:
        raise InfeasibleTheta(f"theta={theta} outside (0, pi/2)")
    return min(theta, math.pi / 2 - theta)


def default_w_hint(c: np.ndarray) -> np.ndarray:
    """First standard basis vector not parallel to c (deterministic)."""
    n = c.shape[0]
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        if float(np.linalg.norm(orth_proj(c, e))) > 1e-9:
            return e
    raise ZeroCenter("no basis vector is independent of c")


def construct_p1(obs: ObstacleSpec, theta: float, w_hint: np.ndarray | None = None) -> np.ndarray:
    """Auxiliary avoidance attractor on the cone of half-angle theta around c.

    Returns p1 = c - ||c||*(cos(theta)*c_hat + sin(theta)*w_hat) where w_hat
    is the normalized component of w_hint orthogonal to c. The scale
    ||p1 - c|| = ||c|| is fixed for reproducibility; any nonzero scale would
    satisfy the cone-membership requirement equally.
    """
    c = obs.c
    nc = obs.norm_c
    if nc == 0.0:
        raise ZeroCenter("obstacle center must be nonzero")
    if w_hint is None:
        w_hint = default_w_hint(c)
    w_hint = as_vector(w_hint, obs.n)
    w_perp = orth_proj(c, w_hint)
    norm_w = float(np.linalg.norm(w_perp))
    if norm_w <= 1e-12 * float(np.linalg.norm(w_hint)):
        raise DegenerateHint("w_hint is (numerically) parallel to c")
    w_hat = w_perp / norm_w
    p1 = c - nc * (math.cos(theta) * (c / nc) + math.sin(theta) * w_hat)
    q = abs(float(cone_quadratic(c, c, theta, p1)))
    if q > 1e-9 or float(np.dot(c, p1 - c)) > 1e-9:
        raise InternalInfeasibility(f"constructed p1 misses the cone (|q|={q})")
    p1.setflags(write=False)
    return p1


@dataclass(frozen=True, eq=False)
class ValidatedParams:
    """Full parameter set with Assumptions 1-2 certified and p1/p-1 built."""

    obstacle: ObstacleSpec
    eps_s: float
    eps_h: float
    mu: float
    theta: float
    psi: float
    psi_bar: float
    gains: tuple[float, float, float]
    mu_min: float
    theta_max: float
    psi_max: float
    p1: np.ndarray
    p_minus1: np.ndarray

    @property
    def c(self) -> np.ndarray:
        return self.obstacle.c

    @property
    def epsilon(self) -> float:
        return self.obstacle.epsilon

    @property
    def n(self) -> int:
        return self.obstacle.n

    def gain(self, m: int) -> float:
        return self.gains[m + 1]

    def p(self, m: int) -> np.ndarray:
        if m == 1:
            return self.p1
        if m == -1:
            return self.p_minus1
        raise ParamsError(f"no auxiliary point for mode {m}")

    def equals(self, other: "ValidatedParams") -> bool:
        return (
            np.array_equal(self.obstacle.c, other.obstacle.c)
            and self.obstacle.epsilon == other.obstacle.epsilon
            and (self.eps_s, self.eps_h, self.mu, self.theta, self.psi, self.psi_bar, self.gains)
            == (other.eps_s, other.eps_h, other.mu, other.theta, other.psi, other.psi_bar, other.gains)
            and np.array_equal(self.p1, other.p1)
        )

    def to_dict(self) -> dict:
        return {
            "obstacle": {"c": self.obstacle.c.tolist(), "epsilon": self.obstacle.epsilon},
            "eps_s": self.eps_s,
            "eps_h": self.eps_h,
            "mu": self.mu,
            "theta": self.theta,
            "psi": self.psi,
            "psi_bar": self.psi_bar,
            "gains": list(self.gains),
            "mu_min": self.mu_min,
            "theta_max": self.theta_max,
            "psi_max": self.psi_max,
            "p1": self.p1.tolist(),
            "p_minus1": self.p_minus1.tolist(),
        }


def validate(raw: RawParams) -> ValidatedParams:
    """Certify a RawParams against every admissibility constraint.

    Collects all violations that are evaluable (a bound whose prerequisite
    failed is skipped, not guessed) and raises ValidationFailure carrying
    the complete list; otherwise returns the immutable ValidatedParams.
    """
    obs = raw.obstacle
    violations: list[Violation] = []

    eh_lo, eh_hi = eps_h_interval(obs)
    eps_h_ok = eh_lo < raw.eps_h < eh_hi
    if not eps_h_ok:
        violations.append(Violation("eps_h", raw.eps_h, f"({eh_lo}, {eh_hi})"))

    if not obs.epsilon < raw.eps_s < raw.eps_h:
        violations.append(Violation("eps_s", raw.eps_s, f"({obs.epsilon}, {raw.eps_h})"))

    mu_lo = theta_hi = None
    theta_reported = False
    if eps_h_ok:
        mu_lo = mu_min(obs, raw.eps_h)
        if not mu_lo < raw.mu < 0.5:
            violations.append(Violation("mu", raw.mu, f"({mu_lo}, 0.5)"))
        else:
            theta_hi = theta_max(obs, raw.eps_h, raw.mu)
            if not 0.0 < raw.theta < theta_hi:
                violations.append(Violation("theta", raw.theta, f"(0, {theta_hi})"))
                theta_reported = True

    psi_hi = None
    if 0.0 < raw.theta < math.pi / 2:
        psi_hi = psi_max(raw.theta)
        if not 0.0 < raw.psi < psi_hi:
            violations.append(Violation("psi", raw.psi, f"(0, {psi_hi})"))
        if not raw.psi < raw.psi_bar < psi_hi:
            violations.append(Violation("psi_bar", raw.psi_bar, f"({raw.psi}, {psi_hi})"))
    elif not theta_reported:
        violations.append(Violation("theta", raw.theta, "(0, pi/2)"))

    if violations:
        raise ValidationFailure(violations)

    p1 = construct_p1(obs, raw.theta, raw.w_hint)
    p_minus1 = -reflect(obs.c, p1)
    # Both auxiliary points must sit on the punctured lower cone around c.
    for name, p in (("p1", p1), ("p_minus1", p_minus1)):
        q = abs(float(cone_quadratic(obs.c, obs.c, raw.theta, p)))
        side = float(np.dot(obs.c, p - obs.c))
        if q > 1e-9 or side > 1e-9 or float(np.linalg.norm(p - obs.c)) < 1e-12:
            raise InternalInfeasibility(f"{name} fails cone membership (|q|={q}, side={side})")
    p_minus1.setflags(write=False)

    return ValidatedParams(
        obstacle=obs,
        eps_s=raw.eps_s,
        eps_h=raw.eps_h,
        mu=raw.mu,
        theta=raw.theta,
        psi=raw.psi,
        psi_bar=raw.psi_bar,
        gains=raw.gains,
        mu_min=mu_lo,
        theta_max=theta_hi,
        psi_max=psi_hi,
        p1=p1,
        p_minus1=p_minus1,
    )
