"""Figure rendering from trajectory and point-cloud files.

Rendering is a pure function of the input files and options: fixed figure
geometry, fixed color assignments, no randomness, and PNG metadata pinned,
so identical inputs reproduce identical bytes under one toolchain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .io import SchemaMismatch, read_pointcloud, read_trajectory  # noqa: E402

CLOUD_STYLE = {
    "obstacle": {"color": "0.55", "s": 4.0, "alpha": 0.35},
    "J0": {"color": "tab:red", "s": 4.0, "alpha": 0.45},
    "F1": {"color": "tab:blue", "s": 4.0, "alpha": 0.45},
    "Fm1": {"color": "tab:green", "s": 4.0, "alpha": 0.45},
    "J1": {"color": "tab:cyan", "s": 4.0, "alpha": 0.45},
    "Jm1": {"color": "tab:olive", "s": 4.0, "alpha": 0.45},
}

TRAJ_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple",
               "tab:brown", "tab:pink", "tab:gray", "tab:olive", "tab:cyan")

_SAVE_OPTS = {"dpi": 130, "metadata": {"Software": "navplots"}}


@dataclass(frozen=True)
class PlotJob:
    trajectories: tuple[str, ...]
    clouds: tuple[str, ...] = ()
    out: str = "figure.png"
    axes: tuple[int, int, int] | None = None
    epsilon: float | None = None
    eps_s: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "trajectories", tuple(self.trajectories))
        object.__setattr__(self, "clouds", tuple(self.clouds))
        if self.axes is not None:
            object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))


def _project(x, axes):
    if x.shape[1] == 3 and axes is None:
        return x
    if axes is None:
        raise SchemaMismatch(
            f"data has dimension {x.shape[1]}; choose three projection axes"
        )
    if len(axes) != 3 or any(a < 0 or a >= x.shape[1] for a in axes):
        raise SchemaMismatch(f"projection axes {axes} invalid for dimension {x.shape[1]}")
    return x[:, list(axes)]


def render_phase(job: PlotJob) -> str:
    """Overlay trajectories and set point clouds in a 3-D phase portrait."""
    trajs = [read_trajectory(p) for p in job.trajectories]
    clouds = [read_pointcloud(p) for p in job.clouds]

    fig = plt.figure(figsize=(7.0, 6.0))
    ax = fig.add_subplot(projection="3d")
    for cloud in clouds:
        pts = _project(cloud.x, job.axes)
        style = CLOUD_STYLE.get(cloud.label, {"color": "0.7", "s": 4.0, "alpha": 0.4})
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], label=cloud.label,
                   depthshade=False, **style)
    for i, tr in enumerate(trajs):
        pts = _project(tr.x, job.axes)
        color = TRAJ_COLORS[i % len(TRAJ_COLORS)]
        ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], color=color, linewidth=1.2)
        if pts.shape[0]:
            ax.scatter(pts[:1, 0], pts[:1, 1], pts[:1, 2], color=color, marker="o", s=18)
    ax.scatter([0.0], [0.0], [0.0], color="k", marker="*", s=50, label="goal")
    labels = ("x_1", "x_2", "x_3") if job.axes is None else tuple(f"x_{a+1}" for a in job.axes)
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    ax.set_zlabel(labels[2])
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(job.out, **_SAVE_OPTS)
    plt.close(fig)
    return job.out


def render_distance(job: PlotJob) -> str:
    """Obstacle distance against time per run, with the obstacle radius and
    the switching-shell radius as horizontal reference lines."""
    trajs = [read_trajectory(p) for p in job.trajectories]

    fig, ax = plt.subplots(figsize=(7.0, 3.2))
    for i, tr in enumerate(trajs):
        ax.plot(tr.t, tr.dist_c, color=TRAJ_COLORS[i % len(TRAJ_COLORS)],
                linewidth=1.2, label=f"run {i}")
    if job.epsilon is not None:
        ax.axhline(job.epsilon, color="k", linewidth=1.4, label="obstacle radius")
    if job.eps_s is not None:
        ax.axhline(job.eps_s, color="k", linewidth=1.0, linestyle="--",
                   label="switching shell")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("distance to obstacle center")
    ax.set_ylim(bottom=0.0)
    if len(trajs) <= 8:
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(job.out, **_SAVE_OPTS)
    plt.close(fig)
    return job.out
