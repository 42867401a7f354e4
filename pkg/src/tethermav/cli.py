"""``tethermav`` command line.

Exit status: 0 on success, 1 when the inputs are well formed but the job
cannot be done (solver failure, bad trace or config, taut tether), 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .catenary import (
    CatenaryError,
    Point2,
    SolverSettings,
    TetherProperties,
    TooShort,
    end_tensions,
    solve_from_endpoints,
    system_residuals,
)
from .config import ConfigError, config_digest, load_config, resolve_config
from .kalman import KalmanConfig, filter_series
from .localization import AnchorPose, locate_from_tension, polar_to_cartesian
from .simkit import TRACE_COLUMNS, ScenarioAborted, run_scenario, summarize
from .tension import TensionVec
from .trace import Trace, TraceError, dump_trace, read_trace, write_trace

OUTPUT_DIR_ENV = "TETHERMAV_OUTPUT_DIR"
_DEFAULT_TETHER = TetherProperties()


class CommandError(Exception):
    """Domain failure reported as ``error: ...`` with exit status 1."""


def _read_input(ref: str) -> Trace:
    try:
        if ref == "-":
            return read_trace(sys.stdin)
        with open(ref, newline="") as fh:
            return read_trace(fh)
    except OSError as exc:
        raise CommandError(f"cannot read {ref}: {exc.strerror}") from None
    except TraceError as exc:
        raise CommandError(str(exc)) from None


@contextmanager
def _output(ref: Optional[str]):
    if ref is None or ref == "-":
        yield sys.stdout
    else:
        with open(ref, "w", newline="") as fh:
            yield fh


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def cmd_solve(args) -> int:
    tether = TetherProperties(omega=args.omega, s_total=args.s_total)
    settings = SolverSettings(tol=args.tol)
    p1, p2 = Point2(args.x1, args.y1), Point2(args.x2, args.y2)
    try:
        params = solve_from_endpoints(p1, p2, tether, settings)
    except TooShort:
        raise CommandError("tether shorter than chord") from None
    except CatenaryError as exc:
        raise CommandError(str(exc)) from None
    print(f"a   {_fmt(params.a)}")
    print(f"x0  {_fmt(params.x0)}")
    print(f"C   {_fmt(params.C)}")
    print(f"s1  {_fmt(params.s1)}")
    print(f"s2  {_fmt(params.s2)}")
    for side in ("origin", "uav"):
        t = end_tensions(params, tether, side)
        print(f"{side:<6}  H {_fmt(t.H)}  Tv {_fmt(t.Tv)}  |T| {_fmt(t.mag)}")
    res = system_residuals(params, p1, p2, tether)
    print("residuals " + " ".join(f"{r:.3e}" for r in res))
    print(f"max_residual {np.max(np.abs(res)):.3e}")
    return 0


def cmd_filter(args) -> int:
    trace = _read_input(args.input)
    if len(trace) == 0:
        raise CommandError("empty input: no data rows")
    try:
        t = trace.floats(["t"])[:, 0]
        obs = trace.floats(["tx_obs", "ty_obs", "tz_obs"])
    except TraceError as exc:
        raise CommandError(str(exc)) from None
    cfg = KalmanConfig(model=args.model, q_var=args.q, r_var=args.r, deriv_a=args.a, deriv_b=args.b)
    est = filter_series(obs, cfg)
    for i, name in enumerate(("tx_est", "ty_est", "tz_est")):
        trace.set_column(name, est[:, i])

    keep = t >= t[0] + args.settle
    if keep.sum() < 2:
        keep[:] = True
    raw_var = obs[keep].var(axis=0)
    est_var = est[keep].var(axis=0)
    print(f"model {cfg.model}  q {cfg.q_var:g}  r {cfg.r_var:g}  rows {len(trace)}", file=sys.stderr)
    print("raw variance      " + " ".join(f"{v:.4e}" for v in raw_var), file=sys.stderr)
    print("filtered variance " + " ".join(f"{v:.4e}" for v in est_var), file=sys.stderr)
    with _output(args.output) as out:
        out.write(dump_trace(trace))
    return 0


def cmd_locate(args) -> int:
    trace = _read_input(args.input)
    if len(trace) == 0:
        raise CommandError("empty input: no data rows")
    try:
        est = trace.floats(["tx_est", "ty_est", "tz_est"])
    except TraceError as exc:
        raise CommandError(str(exc)) from None
    tether = TetherProperties(omega=args.omega, s_total=args.s_total)
    anchor = AnchorPose(args.r_i, args.z_i)
    cols = {k: [] for k in ("r_est", "z_est", "beta_est", "x_est", "y_est")}
    clamped = 0
    for row in est:
        p = locate_from_tension(TensionVec.from_array(row), tether, anchor)
        clamped += p.clamped
        x, y, _ = polar_to_cartesian(p)
        for k, v in zip(cols, (p.r, p.z, p.beta, x, y)):
            cols[k].append(v)
    for k, v in cols.items():
        trace.set_column(k, v)
    print(f"s2 clamped on {clamped} of {len(trace)} rows", file=sys.stderr)
    with _output(args.output) as out:
        out.write(dump_trace(trace))
    return 0


def _default_output(name: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV) or ".") / f"{name}.csv"


def _write_sim_trace(path: Path, result, digest: str) -> None:
    cfg = result.config
    meta = {"scenario": cfg.name, "seed": cfg.seed, "config_sha256": digest}
    with open(path, "w", newline="") as fh:
        write_trace(fh, TRACE_COLUMNS, result.rows, meta)


def cmd_sim(args) -> int:
    try:
        cfg = load_config(resolve_config(args.config), seed=args.seed)
    except FileNotFoundError as exc:
        raise CommandError(str(exc)) from None
    except ConfigError as exc:
        raise CommandError(str(exc)) from None

    if args.output is None:
        out = _default_output(cfg.name)
    else:
        out = Path(args.output)
        if out.is_dir():
            out = out / f"{cfg.name}.csv"
    digest = config_digest(cfg)

    try:
        result = run_scenario(cfg)
    except ScenarioAborted as exc:
        _write_sim_trace(out, exc.partial, digest)
        raise CommandError(f"tether taut, run aborted: {exc} (partial trace in {out})") from None
    _write_sim_trace(out, result, digest)

    s = summarize(result)
    print(f"scenario            {cfg.name}")
    print(f"seed                {cfg.seed}")
    print(f"trace               {out}")
    print(f"rows                {s['rows']}")
    print(f"tension_rms_error   {s['tension_rms_error']:.6f} N")
    print(f"position_rms_error  {s['position_rms_error']:.6f} m")
    print(f"horizontal_tension_mean {s['horizontal_tension_mean']:.6f} N")
    print(f"following           {str(s['following']).lower()}")
    print(f"motors_off          {str(s['motors_off']).lower()}")
    print(f"final_altitude      {s['final_altitude']:.4f} m")
    return 0


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {text}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"seed must be non-negative: {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tethermav", description="Tethered quadcopter tools.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="catenary through two points for a given tether length")
    for name in ("x1", "y1", "x2", "y2"):
        s.add_argument(name, type=_finite)
    s.add_argument("s_total", type=_positive, help="tether length (m)")
    s.add_argument("--tol", type=_positive, default=SolverSettings().tol)
    s.add_argument("--omega", type=_positive, default=_DEFAULT_TETHER.omega, help="weight per length (N/m)")
    s.set_defaults(func=cmd_solve)

    f = sub.add_parser("filter", help="Kalman-filter the observed tension columns of a trace")
    f.add_argument("input", help="CSV trace, or - for stdin")
    f.add_argument("-o", "--output", help="output file (default stdout)")
    f.add_argument("--model", choices=("constant", "derivative"), default="constant")
    f.add_argument("--q", type=_positive, default=None, help="process noise variance (N^2)")
    f.add_argument("--r", type=_positive, default=KalmanConfig().r_var, help="measurement noise variance (N^2)")
    f.add_argument("--a", type=_finite, default=KalmanConfig().deriv_a, help="first-difference weight")
    f.add_argument("--b", type=_finite, default=KalmanConfig().deriv_b, help="second-difference weight")
    f.add_argument("--settle", type=float, default=2.0, help="seconds skipped before variances are computed")
    f.set_defaults(func=cmd_filter)

    loc = sub.add_parser("locate", help="estimate position from the filtered tension columns")
    loc.add_argument("input", help="CSV trace, or - for stdin")
    loc.add_argument("-o", "--output", help="output file (default stdout)")
    loc.add_argument("--omega", type=_positive, default=_DEFAULT_TETHER.omega)
    loc.add_argument("--s-total", type=_positive, default=_DEFAULT_TETHER.s_total)
    loc.add_argument("--r-i", type=_finite, default=0.0)
    loc.add_argument("--z-i", type=_finite, default=0.0)
    loc.set_defaults(func=cmd_locate)

    sim = sub.add_parser("sim", help="run a scenario and write its trace")
    sim.add_argument("config", help="scenario TOML file or bundled scenario name")
    sim.add_argument("output", nargs="?", help=f"trace path or directory (default ${OUTPUT_DIR_ENV} or cwd)")
    sim.add_argument("--seed", type=_seed, default=None, help="override the scenario seed")
    sim.set_defaults(func=cmd_sim)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
