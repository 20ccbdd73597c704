"""Configuration-driven entry point.

Subcommands: validate | simulate | verify | sample-sets. A scenario lives
in one JSON document (dimension inferred from the obstacle center). Exit
codes: 0 success, 1 a property/validation/run failed, 2 unusable config or
arguments. NAV_SEED overrides the default seed; an explicit --seed wins.

File contracts (all other tooling consumes only these):
  trajectory CSV   header t,j,m,x_1..x_n,dist_c,V,u_1..u_n; floats are
                   shortest round-trip decimals, so reruns are byte-stable
  summary JSON     per-run jumps/min_dist/t_converge/ambiguity/terminal
                   plus the fully resolved parameters for provenance
  point-cloud CSV  x_1..x_n,set_label
  report JSON      list of PropertyReport dicts (see verify.PropertyReport)
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .controller import flow_margin, jump_margin, kappa
from .hybrid_sim import SimConfig, batch_simulate
from .params import ObstacleSpec, ParamsError, RawParams, ValidationFailure, validate
from .verify import lyapunov_value

SET_NAMES = ("F0", "J0", "F1", "Fm1", "J1", "Jm1", "obstacle")


class ConfigError(ValueError):
    pass


def _require_keys(section: dict, allowed: set[str], required: set[str], where: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")
    missing = required - set(section)
    if missing:
        raise ConfigError(f"missing keys {sorted(missing)} in {where}")


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    _require_keys(doc, {"obstacle", "params", "sim", "runs", "outputs"},
                  {"obstacle", "params"}, "config")

    _require_keys(doc["obstacle"], {"c", "epsilon"}, {"c", "epsilon"}, "obstacle")
    _require_keys(doc["params"],
                  {"eps_s", "eps_h", "mu", "theta", "psi", "psi_bar", "gains", "w_hint"},
                  {"eps_s", "eps_h", "mu", "theta", "psi", "psi_bar", "gains"}, "params")
    sim = doc.get("sim", {})
    _require_keys(sim, {"h", "t_max", "goal_tol", "event_tol", "max_jumps_hard"}, set(), "sim")
    outputs = doc.get("outputs", {})
    _require_keys(outputs, {"trajectory_dir", "summary_path", "pointcloud"}, set(), "outputs")
    if "pointcloud" in outputs:
        _require_keys(outputs["pointcloud"], {"sets", "samples_per_set"}, {"sets"},
                      "outputs.pointcloud")
    for i, run in enumerate(doc.get("runs", [])):
        _require_keys(run, {"x0", "m0"}, {"x0", "m0"}, f"runs[{i}]")
    return doc


def build_raw_params(doc: dict) -> RawParams:
    try:
        obs = ObstacleSpec(c=np.array(doc["obstacle"]["c"], dtype=float),
                           epsilon=float(doc["obstacle"]["epsilon"]))
        p = doc["params"]
        gains = p["gains"]
        if len(gains) != 3:
            raise ConfigError("params.gains must be [k_minus1, k_0, k_plus1]")
        w_hint = np.array(p["w_hint"], dtype=float) if "w_hint" in p else None
        return RawParams(obstacle=obs, eps_s=float(p["eps_s"]), eps_h=float(p["eps_h"]),
                         mu=float(p["mu"]), theta=float(p["theta"]), psi=float(p["psi"]),
                         psi_bar=float(p["psi_bar"]),
                         gains=tuple(float(k) for k in gains), w_hint=w_hint)
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"malformed parameter section: {exc}") from exc


def build_sim_config(doc: dict) -> SimConfig:
    sim = doc.get("sim", {})
    kwargs = {k: (int(v) if k == "max_jumps_hard" else float(v)) for k, v in sim.items()}
    try:
        return SimConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"bad sim section: {exc}") from exc


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get("NAV_SEED", "0"))


def _fmt(v: float) -> str:
    return repr(float(v))


# ---------------------------------------------------------------------------
# validate


def cmd_validate(args) -> int:
    doc = load_config(args.config)
    raw = build_raw_params(doc)
    try:
        P = validate(raw)
    except ValidationFailure as exc:
        print("derived bounds could not all be certified:")
        for v in exc.violations:
            print(f"constraint {v.constraint}: FAIL ({v.actual!r} not in {v.allowed})")
        print("RESULT: INVALID")
        return 1
    print(f"mu_min    = {_fmt(P.mu_min)}")
    print(f"theta_max = {_fmt(P.theta_max)}")
    print(f"psi_max   = {_fmt(P.psi_max)}")
    print(f"p1        = {[round(float(v), 6) for v in P.p1]}")
    print(f"p_minus1  = {[round(float(v), 6) for v in P.p_minus1]}")
    for name in ("eps_h", "eps_s", "mu", "theta", "psi", "psi_bar"):
        print(f"constraint {name}: PASS ({getattr(P, name)})")
    print("RESULT: VALID")
    return 0


# ---------------------------------------------------------------------------
# simulate


def _write_trajectory_csv(path: Path, traj, P):
    n = P.n
    header = (["t", "j", "m"] + [f"x_{i+1}" for i in range(n)]
              + ["dist_c", "V"] + [f"u_{i+1}" for i in range(n)])
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for j, arc in enumerate(traj.arcs):
            u = kappa(arc.states, arc.mode, P)
            dist = np.linalg.norm(arc.states - P.c, axis=-1)
            vv = lyapunov_value(arc.states, arc.mode, P)
            for k in range(arc.states.shape[0]):
                row = [_fmt(arc.times[k]), str(j), str(arc.mode)]
                row += [_fmt(val) for val in arc.states[k]]
                row += [_fmt(dist[k]), _fmt(vv[k])]
                row += [_fmt(val) for val in u[k]]
                fh.write(",".join(row) + "\n")


def cmd_simulate(args) -> int:
    doc = load_config(args.config)
    raw = build_raw_params(doc)
    try:
        P = validate(raw)
    except ValidationFailure as exc:
        print(f"parameters invalid: {exc}", file=sys.stderr)
        return 2
    cfg = build_sim_config(doc)
    seed = _resolve_seed(args)

    runs = doc.get("runs", [])
    inits = []
    for i, run in enumerate(runs):
        x0 = np.array(run["x0"], dtype=float)
        if x0.shape != (P.n,):
            raise ConfigError(f"runs[{i}].x0 must have dimension {P.n}")
        m0 = int(run["m0"])
        if m0 not in (-1, 0, 1):
            raise ConfigError(f"runs[{i}].m0 must be -1, 0, or 1")
        inits.append((x0, m0))

    trajectories = batch_simulate(inits, P, cfg, parallel=args.parallel)

    outputs = doc.get("outputs", {})
    traj_dir = Path(outputs.get("trajectory_dir", "out/trajectories"))
    traj_dir.mkdir(parents=True, exist_ok=True)
    summary_path = Path(outputs.get("summary_path", "out/summary.json"))
    summary_path.parent.mkdir(parents=True, exist_ok=True)

    per_run = []
    for i, traj in enumerate(trajectories):
        csv_path = traj_dir / f"run_{i:03d}.csv"
        _write_trajectory_csv(csv_path, traj, P)
        per_run.append({
            "index": i,
            "x0": traj.x0.tolist(),
            "m0": traj.m0,
            "jumps": traj.jump_count,
            "min_dist": traj.min_dist() if traj.arcs else None,
            "t_converge": traj.t_converge,
            "ambiguity_count": traj.ambiguity_count,
            "terminal_reason": traj.terminal_reason,
            "csv": str(csv_path),
        })
        print(f"run {i}: {traj.terminal_reason} jumps={traj.jump_count} "
              f"min_dist={traj.min_dist() if traj.arcs else None}")

    summary = {
        "seed": seed,
        "n": P.n,
        "params": P.to_dict(),
        "sim": cfg.to_dict(),
        "runs": per_run,
    }
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2)
    print(f"summary written to {summary_path}")
    return 0 if all(r["terminal_reason"] == "converged" for r in per_run) else 1


# ---------------------------------------------------------------------------
# verify


def _parse_dims(spec: str | None) -> list[int]:
    if not spec:
        return []
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in spec.split(",") if tok]


def _lemma_suite(P, samples, seed):
    v1 = P.p1 - P.c
    v2 = P.p_minus1 - P.c
    return [
        verify_mod.check_lemma1(P.c, v1, v2, P.psi_bar, P.psi_bar, samples, seed),
        verify_mod.check_lemma3(P, samples, seed),
        verify_mod.check_lemma4(P, samples),
        verify_mod.check_jump_cover(P, samples, seed),
    ]


def cmd_verify(args) -> int:
    doc = load_config(args.config)
    raw = build_raw_params(doc)
    try:
        P = validate(raw)
    except ValidationFailure as exc:
        print(f"parameters invalid: {exc}", file=sys.stderr)
        return 2
    seed = _resolve_seed(args)
    samples = args.samples
    reports = []

    configs = [(P.n, P)]
    for dim in _parse_dims(args.dims):
        configs.append((dim, verify_mod.random_feasible_params(dim, seed + dim)))

    for _dim, params in configs:
        if args.suite in ("lemmas", "all"):
            reports.extend(_lemma_suite(params, samples, seed))
        if args.suite in ("boundary", "all"):
            reports.append(verify_mod.check_boundary_flow(params, samples, seed))

    if args.suite in ("trajectory", "all"):
        cfg = build_sim_config(doc)
        inits = [(np.array(r["x0"], dtype=float), int(r["m0"])) for r in doc.get("runs", [])]
        for traj in batch_simulate(inits, P, cfg, parallel=args.parallel):
            reports.append(verify_mod.audit_trajectory(traj, P))

    all_passed = all(r.passed for r in reports)
    payload = {
        "seed": seed,
        "samples": samples,
        "suite": args.suite,
        "dims": _parse_dims(args.dims),
        "all_passed": all_passed,
        "reports": [r.to_dict() for r in reports],
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=2)
    for r in reports:
        status = "PASS" if r.passed else f"FAIL ({r.failure_count} witnesses)"
        print(f"{r.name}: {status}")
    print(f"report written to {out}")
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# sample-sets


def _set_margin_fn(name: str, P):
    if name == "obstacle":
        fn = lambda x: np.linalg.norm(x - P.c, axis=-1) - P.epsilon  # noqa: E731
        return fn, P.epsilon
    mode = {"F0": 0, "J0": 0, "F1": 1, "J1": 1, "Fm1": -1, "Jm1": -1}[name]
    margin = flow_margin if name.startswith("F") else jump_margin
    if name == "F0":
        half = 2.0 * (P.eps_h + P.obstacle.norm_c)
    elif name == "J0":
        half = P.eps_s
    else:
        half = P.eps_h
    return (lambda x: margin(x, mode, P)), half


def cmd_sample_sets(args) -> int:
    doc = load_config(args.config)
    raw = build_raw_params(doc)
    try:
        P = validate(raw)
    except ValidationFailure as exc:
        print(f"parameters invalid: {exc}", file=sys.stderr)
        return 2
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    margin_fn, half = _set_margin_fn(args.set, P)
    pts, used = verify_mod.rejection_sample(margin_fn, P.c, half, args.samples, rng)
    rate = pts.shape[0] / max(used, 1)
    out = Path(args.out or f"{args.set}_cloud.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        fh.write(",".join([f"x_{i+1}" for i in range(P.n)] + ["set_label"]) + "\n")
        for row in pts:
            fh.write(",".join(_fmt(v) for v in row) + f",{args.set}\n")
    print(f"{pts.shape[0]} points of {args.set} written to {out} (acceptance {rate:.2e})")
    if pts.shape[0] < args.samples and rate < 1e-5:
        print("acceptance rate below 1e-5: set looks empty or misconfigured", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="helmnav",
        description="Hybrid stabilize/avoid controller: validate, simulate, verify, export sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="certify a parameter set")
    p_val.add_argument("config")

    p_sim = sub.add_parser("simulate", help="run the configured scenarios")
    p_sim.add_argument("config")
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--parallel", type=int, default=1)

    p_ver = sub.add_parser("verify", help="run property suites")
    p_ver.add_argument("config")
    p_ver.add_argument("--suite", choices=("lemmas", "boundary", "trajectory", "all"),
                       default="all")
    p_ver.add_argument("--dims", default=None, help="extra dimensions, e.g. 2..6 or 2,4")
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--samples", type=int, default=10_000)
    p_ver.add_argument("--parallel", type=int, default=1)
    p_ver.add_argument("--out", default="out/verify_report.json")

    p_set = sub.add_parser("sample-sets", help="export a region point cloud")
    p_set.add_argument("config")
    p_set.add_argument("--set", choices=SET_NAMES, required=True)
    p_set.add_argument("--samples", type=int, default=2000)
    p_set.add_argument("--seed", type=int, default=None)
    p_set.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "simulate": cmd_simulate,
        "verify": cmd_verify,
        "sample-sets": cmd_sample_sets,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ParamsError) as exc:
        if isinstance(exc, ValidationFailure):
            print(f"validation failed: {exc}", file=sys.stderr)
            return 1
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
