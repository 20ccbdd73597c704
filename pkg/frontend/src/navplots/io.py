"""Readers for the simulator's file contracts.

Only the public CSV/JSON schemas are consumed here; there is no import of
the simulator package, so the plotting tool works on any conforming files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np


class SchemaMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Trajectory:
    """Columns of one trajectory CSV (t,j,m,x_1..x_n,dist_c,V,u_1..u_n)."""

    t: np.ndarray
    j: np.ndarray
    m: np.ndarray
    x: np.ndarray
    dist_c: np.ndarray
    v: np.ndarray
    u: np.ndarray

    @property
    def n(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class PointCloud:
    x: np.ndarray
    label: str

    @property
    def n(self) -> int:
        return self.x.shape[1]


def _trajectory_header_dim(header: list[str]) -> int:
    if header[:3] != ["t", "j", "m"]:
        raise SchemaMismatch(f"trajectory header must start with t,j,m, got {header[:3]}")
    n = 0
    while 3 + n < len(header) and header[3 + n] == f"x_{n + 1}":
        n += 1
    expected = ["t", "j", "m"] + [f"x_{i+1}" for i in range(n)] + ["dist_c", "V"] \
        + [f"u_{i+1}" for i in range(n)]
    if n < 2 or header != expected:
        raise SchemaMismatch(f"unexpected trajectory header {header}")
    return n


def read_trajectory(path: str) -> Trajectory:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path} is empty") from None
        n = _trajectory_header_dim(header)
        try:
            data = np.array([[float(v) for v in row] for row in reader], dtype=float)
        except ValueError as exc:
            raise SchemaMismatch(f"{path}: non-numeric cell ({exc})") from exc
    if data.size == 0:
        data = data.reshape(0, len(header))
    if data.shape[1] != len(header):
        raise SchemaMismatch(f"{path}: row width does not match header")
    return Trajectory(
        t=data[:, 0],
        j=data[:, 1].astype(int),
        m=data[:, 2].astype(int),
        x=data[:, 3:3 + n],
        dist_c=data[:, 3 + n],
        v=data[:, 4 + n],
        u=data[:, 5 + n:5 + 2 * n],
    )


def read_pointcloud(path: str) -> PointCloud:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path} is empty") from None
        if header[-1] != "set_label" or header[:-1] != [f"x_{i+1}" for i in range(len(header) - 1)]:
            raise SchemaMismatch(f"unexpected point-cloud header {header}")
        rows = list(reader)
    if not rows:
        raise SchemaMismatch(f"{path}: no points")
    labels = {row[-1] for row in rows}
    if len(labels) != 1:
        raise SchemaMismatch(f"{path}: mixed set labels {sorted(labels)}")
    try:
        pts = np.array([[float(v) for v in row[:-1]] for row in rows], dtype=float)
    except ValueError as exc:
        raise SchemaMismatch(f"{path}: non-numeric cell ({exc})") from exc
    return PointCloud(x=pts, label=labels.pop())


def read_summary(path: str) -> dict:
    """Resolved-parameter echo from the simulator's summary JSON."""
    with open(path) as fh:
        doc = json.load(fh)
    try:
        return {
            "epsilon": float(doc["params"]["obstacle"]["epsilon"]),
            "eps_s": float(doc["params"]["eps_s"]),
            "eps_h": float(doc["params"]["eps_h"]),
        }
    except (KeyError, TypeError) as exc:
        raise SchemaMismatch(f"{path}: missing parameter echo ({exc})") from exc
