"""Command line: plot phase|distance --traj ... --clouds ... --out file.png."""

from __future__ import annotations

import argparse
import sys

from .io import SchemaMismatch, read_summary
from .render import PlotJob, render_distance, render_phase


def _parse_axes(spec: str | None):
    if spec is None:
        return None
    try:
        axes = tuple(int(tok) for tok in spec.split(","))
    except ValueError as exc:
        raise SchemaMismatch(f"bad --axes {spec!r}: {exc}") from exc
    return axes


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="navplot",
        description="Render simulator outputs: 3-D phase portrait or distance series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("phase", "distance"):
        p = sub.add_parser(name)
        p.add_argument("--traj", nargs="*", default=[], help="trajectory CSV files")
        p.add_argument("--clouds", nargs="*", default=[], help="point-cloud CSV files")
        p.add_argument("--out", required=True, help="output image path")
        p.add_argument("--summary", default=None,
                       help="simulator summary JSON (supplies the radii)")
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--eps-s", dest="eps_s", type=float, default=None)
        p.add_argument("--axes", default=None,
                       help="three projection axes for n > 3 data, e.g. 0,1,2")

    args = parser.parse_args(argv)
    try:
        epsilon, eps_s = args.epsilon, args.eps_s
        if args.summary is not None:
            radii = read_summary(args.summary)
            epsilon = radii["epsilon"] if epsilon is None else epsilon
            eps_s = radii["eps_s"] if eps_s is None else eps_s
        job = PlotJob(trajectories=tuple(args.traj), clouds=tuple(args.clouds),
                      out=args.out, axes=_parse_axes(args.axes),
                      epsilon=epsilon, eps_s=eps_s)
        render = render_phase if args.command == "phase" else render_distance
        out = render(job)
    except (SchemaMismatch, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
