"""Command-line experiment runner.

Subcommands ``run``, ``detect``, ``combined`` and ``analyze`` write CSV to
``--out`` (standard output by default).  Every output starts with a
``# config: {...}`` comment holding the effective configuration as JSON;
feeding that JSON back through ``--config`` reproduces the run exactly.

Exit codes: 0 success, 1 divergence or no result, 2 configuration error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Optional

import numpy as np

from . import baseline, conserve, objective, spectral
from .trace import DivergenceError, RunTrace

EXIT_OK, EXIT_DIVERGED, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------
# objectives by name

OBJECTIVE_PARAMS = ("dim", "seed", "rho", "m", "diag", "matrix", "b", "slope")
# random instances; their seed is always written to the config header
SEEDED_OBJECTIVES = ("quadratic-random", "lse")


def _vector(value, dim: Optional[int] = None, what: str = "vector") -> np.ndarray:
    if isinstance(value, str):
        try:
            value = [float(t) for t in value.split(",") if t.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse {what}: {value!r}") from exc
    arr = np.array(value, dtype=float, ndmin=1)
    if dim is not None:
        if arr.shape == (1,):
            arr = np.full(dim, arr[0])
        if arr.shape != (dim,):
            raise ConfigError(f"{what} has length {arr.size}, objective has dim {dim}")
    return arr


def _load_matrix(path: str) -> np.ndarray:
    if path.endswith(".npy"):
        return np.load(path)
    return np.loadtxt(path, delimiter="," if path.endswith(".csv") else None, ndmin=2)


def build_objective(spec: dict) -> objective.Objective:
    spec = dict(spec)
    name = spec.pop("name", None)
    if name is None:
        raise ConfigError("objective name missing")
    unknown = set(spec) - set(OBJECTIVE_PARAMS)
    if unknown:
        raise ConfigError(f"unknown objective parameters: {sorted(unknown)}")
    try:
        if name == "quadratic":
            if "diag" in spec:
                diag = _vector(spec["diag"], what="diag")
                b = _vector(spec.get("b", 0.0), diag.size, "b")
                return objective.quadratic(objective.diagonal_quadratic(diag, b))
            if "matrix" in spec:
                A = _load_matrix(spec["matrix"])
                b = _vector(spec.get("b", 0.0), A.shape[0], "b")
                return objective.quadratic(objective.QuadraticSpec(A, b))
            raise ConfigError("quadratic needs 'diag' or 'matrix'")
        if name == "quadratic-random":
            return objective.quadratic(
                objective.random_spd_quadratic(int(spec.get("dim", 500)), int(spec.get("seed", 0)))
            )
        if name == "quadratic-nesterov":
            return objective.quadratic(objective.nesterov_worst_case(int(spec.get("dim", 1000))))
        if name == "lse":
            return objective.random_log_sum_exp(
                int(spec.get("dim", 50)),
                int(spec.get("m", 200)),
                float(spec.get("rho", 5.0)),
                int(spec.get("seed", 0)),
            )
        if name == "styblinski-tang":
            return objective.styblinski_tang(int(spec.get("dim", 2)))
        if name == "shekel":
            return objective.shekel(int(spec.get("m", 10)))
        if name == "piecewise-cosine":
            return objective.piecewise_cosine_1d()
        if name == "sine-bowl":
            return objective.sine_bowl_2d()
        if name == "linear":
            dim = int(spec.get("dim", 1))
            return objective.linear(_vector(spec.get("slope", 1.0), dim, "slope"))
    except ConfigError:
        raise
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad parameters for objective {name!r}: {exc}") from exc
    raise ConfigError(f"unknown objective {name!r}")


# --------------------------------------------------------------------------
# argument handling

RUN_ALGORITHMS = ("gd", "heavy-ball", "nesterov", "ade")
# keys echoed into the config header (besides "objective")
RUN_KEYS = ("h", "eps", "maxiter", "x0", "v0", "gamma", "kappa", "n_steps",
            "starts", "h_local", "scheme", "every", "point", "algorithm")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help="JSON config file; flags override its values")
    g.add_argument("--out", help="output path (default: standard output)")
    g.add_argument("--objective", dest="objective_name")
    g.add_argument("--dim", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--rho", type=float)
    g.add_argument("--m", type=int)
    g.add_argument("--diag", help="comma-separated diagonal for a quadratic")
    g.add_argument("--matrix", help="matrix file (.npy, .csv or whitespace text)")
    g.add_argument("--b", help="linear term, comma list or scalar")
    g.add_argument("--slope", help="slope of a linear objective")
    g.add_argument("--h", type=float)
    g.add_argument("--eps", type=float)
    g.add_argument("--maxiter", type=int)
    g.add_argument("--x0", help="start point, comma list or scalar (broadcast)")
    g.add_argument("--v0", help="initial velocity, comma list or scalar")
    g.add_argument("--every", type=int, help="write every k-th trace row")

    p = argparse.ArgumentParser(prog="conslaw", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="run one optimiser, write its trace")
    run.add_argument("--algorithm", choices=RUN_ALGORITHMS)
    run.add_argument("--gamma", type=float)
    run.add_argument("--kappa", type=float)
    det = sub.add_parser("detect", parents=[common], help="record speed peaks along a trajectory")
    det.add_argument("--n-steps", dest="n_steps", type=int)
    det.add_argument("--scheme", choices=("euler", "verlet"))
    comb = sub.add_parser("combined", parents=[common], help="detect then minimise from every start")
    comb.add_argument("--start", dest="starts", action="append", help="repeatable start point")
    comb.add_argument("--n-steps", dest="n_steps", type=int)
    comb.add_argument("--h-local", dest="h_local", type=float)
    ana = sub.add_parser("analyze", parents=[common], help="mode table of the Hessian at a point")
    ana.add_argument("--point")
    return p


def effective_config(args: argparse.Namespace) -> dict:
    cfg: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    cfg.pop("command", None)
    obj = dict(cfg.get("objective") or {})
    if args.objective_name is not None:
        obj["name"] = args.objective_name
    for key in OBJECTIVE_PARAMS:
        val = getattr(args, key, None)
        if val is not None:
            obj[key] = val
    if obj.get("name") in SEEDED_OBJECTIVES:
        obj.setdefault("seed", 0)
    cfg["objective"] = obj
    for key in RUN_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    unknown = set(cfg) - set(RUN_KEYS) - {"objective"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _require(cfg: dict, key: str):
    if cfg.get(key) is None:
        raise ConfigError(f"missing required setting {key!r}")
    return cfg[key]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _header(out, command: str, cfg: dict):
    echo = dict(cfg, command=command)
    out.write("# config: " + json.dumps(echo, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x))


# --------------------------------------------------------------------------
# commands


def _write_trace(out, trace: RunTrace, every: int):
    out.write("k,f,grad_norm,v_norm,reset\n")
    for i in range(0, trace.iterations, every):
        out.write(
            f"{int(trace.k[i])},{_fmt(trace.f[i])},{_fmt(trace.grad_norm[i])},"
            f"{_fmt(trace.v_norm[i])},{_fmt(bool(trace.reset[i]))}\n"
        )


def cmd_run(cfg: dict, out, log) -> int:
    f = build_objective(cfg["objective"])
    algorithm = _require(cfg, "algorithm")
    if algorithm not in RUN_ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}")
    x0 = _vector(_require(cfg, "x0"), f.dim, "x0")
    h = float(_require(cfg, "h"))
    eps = float(cfg.get("eps", 1e-6))
    maxiter = int(cfg.get("maxiter", 100_000))
    every = int(cfg.get("every", 1))
    if every < 1:
        raise ConfigError("every must be at least 1")
    try:
        if algorithm == "ade":
            trace = conserve.ade_minimize(f, x0, conserve.RunConfig(h, maxiter, eps))
        else:
            bcfg = baseline.BaselineConfig(
                h, maxiter, eps, gamma=cfg.get("gamma"), kappa=cfg.get("kappa")
            )
            runner = {
                "gd": baseline.gradient_descent,
                "heavy-ball": baseline.heavy_ball,
                "nesterov": baseline.nesterov_agd,
            }[algorithm]
            trace = runner(f, x0, bcfg)
    except DivergenceError as exc:
        trace = exc.trace
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _header(out, "run", cfg)
    _write_trace(out, trace, every)
    log.write(
        f"iterations={trace.iterations} final_f={_fmt(trace.final_f)} "
        f"termination={trace.termination}\n"
    )
    return EXIT_DIVERGED if trace.termination == "diverged" else EXIT_OK


def _detect_config(cfg: dict, f) -> conserve.RunConfig:
    h = float(_require(cfg, "h"))
    v0 = _vector(_require(cfg, "v0"), f.dim, "v0")
    try:
        return conserve.RunConfig(h, v0=v0, scheme=cfg.get("scheme", "euler"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_detect(cfg: dict, out, log) -> int:
    f = build_objective(cfg["objective"])
    x0 = _vector(_require(cfg, "x0"), f.dim, "x0")
    n = int(_require(cfg, "n_steps"))
    if n < 2:
        raise ConfigError("n_steps must be at least 2")
    found = conserve.ec_detect(f, x0, _detect_config(cfg, f), n)
    _header(out, "detect", cfg)
    out.write(f"# steps: {found.steps} diverged: {str(found.diverged).lower()}\n")
    cols = ",".join(f"x{i + 1}" for i in range(f.dim))
    out.write(f"step_index,{cols},f\n")
    for c in found:
        out.write(f"{c.step_index}," + ",".join(_fmt(v) for v in c.position) + f",{_fmt(c.f)}\n")
    if not len(found):
        log.write("warning: no candidates detected\n")
    log.write(f"candidates={len(found)} steps={found.steps}\n")
    return EXIT_DIVERGED if found.diverged else EXIT_OK


def cmd_combined(cfg: dict, out, log) -> int:
    f = build_objective(cfg["objective"])
    starts = cfg.get("starts") or ([cfg["x0"]] if cfg.get("x0") is not None else None)
    if not starts:
        raise ConfigError("combined needs at least one start (--start or x0)")
    starts = [_vector(s, f.dim, "start") for s in starts]
    n = int(_require(cfg, "n_steps"))
    detect_cfg = _detect_config(cfg, f)
    local_cfg = conserve.RunConfig(
        float(cfg.get("h_local", detect_cfg.h)),
        int(cfg.get("maxiter", 100_000)),
        float(cfg.get("eps", 1e-6)),
    )
    try:
        res = conserve.combined_search(f, starts, detect_cfg, n, local_cfg)
    except conserve.NoCandidatesError as exc:
        log.write(f"error: {exc}\n")
        return EXIT_DIVERGED
    _header(out, "combined", cfg)
    cols = ",".join(f"x{i + 1}" for i in range(f.dim))
    out.write(f"kind,start,step_index,f,{cols}\n")

    def row(kind, start, step, val, x):
        out.write(f"{kind},{start},{step},{_fmt(val)}," + ",".join(_fmt(v) for v in x) + "\n")

    for i, det in enumerate(res.detections):
        for c in det:
            row("candidate", i, c.step_index, c.f, c.position)
    for m in res.minima:
        row("minimum", m.start_index, m.candidate.step_index, m.f, m.position)
    row("global", "", "", res.f, res.x)
    for w in res.warnings:
        log.write(f"warning: {w}\n")
    log.write(
        f"global_f={_fmt(res.f)} minima={len(res.minima)} "
        f"candidates={sum(len(d) for d in res.detections)}\n"
    )
    return EXIT_OK


def cmd_analyze(cfg: dict, out, log) -> int:
    f = build_objective(cfg["objective"])
    if f.hessian is None:
        raise ConfigError(f"objective {f.name!r} has no Hessian")
    h = float(_require(cfg, "h"))
    point = cfg.get("point", cfg.get("x0", 0.0))
    x = _vector(point, f.dim, "point")
    H = np.asarray(f.hessian(x), dtype=float)
    try:
        rows = spectral.mode_table(H, h)
    except ValueError as exc:
        raise ConfigError(f"cannot analyse Hessian at point: {exc}") from exc
    _header(out, "analyze", cfg)
    out.write("omega,theta,phi,first_reset_estimate\n")
    for r in rows:
        out.write(
            f"{_fmt(r['omega'])},{_fmt(r['theta'])},{_fmt(r['phi'])},"
            f"{_fmt(r['first_reset_estimate'])}\n"
        )
    drift = sum(1 for r in rows if r["omega"] == 0.0)
    log.write(f"modes={len(rows)} drift_modes={drift}\n")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "detect": cmd_detect, "combined": cmd_combined, "analyze": cmd_analyze}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = _parser().parse_args(argv)
    buf = io.StringIO()
    # summary goes to stdout only when the CSV does not
    log = stdout if args.out else stderr
    try:
        cfg = effective_config(args)
        code = COMMANDS[args.command](cfg, buf, log)
    except ConfigError as exc:
        stderr.write(f"conslaw {args.command}: error: {exc}\n")
        return EXIT_CONFIG
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
