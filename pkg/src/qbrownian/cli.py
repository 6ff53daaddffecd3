"""Command line front end: trace generation, figure data and sweeps.

Output is deterministic RFC-4180-style CSV (LF endings, 12 significant
digits), so repeated runs with the same configuration are byte
identical.  Exit codes: 0 success, 2 invalid configuration, 3 numeric
failure, 4 Fock-space truncation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .fock import TruncationError, evolve, fock_state, mean_n
from .heating import heating_exact, heating_markov, heating_short_time
from .kernels import ClosedFormError, rate_trace
from .quadrature import QuadratureError
from .spectral import (SpectrumParams, TemperatureMode, TemperatureRegime,
                       thermalization_time_normalized)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_TRUNCATION = 4

_HEATING_MODES = ("exact", "markov", "short-full", "short-hight")


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _default_tol() -> float:
    try:
        return float(os.environ.get("QBM_TOL", 1e-10))
    except ValueError as exc:
        raise ValueError(f"QBM_TOL is not a number: {exc}") from exc


def _load_config(path: str) -> dict:
    """Parse a simple ``key = value`` configuration file."""
    out = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _resolve(ns: argparse.Namespace, config: dict, key: str, cast,
             default=None):
    """Flag beats config file beats default."""
    flag = getattr(ns, key, None)
    if flag is not None:
        return cast(flag)
    if key in config:
        return cast(config[key])
    return default


def _floats_list(text: str):
    return [float(x) for x in str(text).split(",") if x.strip()]


def _temperature(ns, config) -> TemperatureRegime:
    mode = _resolve(ns, config, "temp_mode", str)
    theta = _resolve(ns, config, "theta", float)
    if mode is None:
        mode = "zero"
    if mode == "zero":
        return TemperatureRegime.zero()
    if theta is None:
        raise ValueError(f"temperature mode {mode!r} needs a theta value")
    if mode == "high":
        return TemperatureRegime.high_t(theta)
    if mode == "exact":
        return TemperatureRegime.exact(theta)
    raise ValueError(f"unknown temperature mode {mode!r}")


def _grid(t_max: float, n_points: int) -> np.ndarray:
    if t_max < 0:
        raise ValueError("t-max must be >= 0")
    if not (2 <= n_points <= 10**6):
        raise ValueError("n must lie in [2, 1000000]")
    if t_max == 0.0:
        return np.array([0.0])
    return np.linspace(0.0, t_max, n_points)


def _write_csv(path: str, header: list[str], columns: list):
    rows = zip(*columns)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(cell if isinstance(cell, str) else _fmt(cell)
                              for cell in row) + "\n")


def _fan_out(pairs, worker, max_workers):
    if len(pairs) == 1:
        worker(*pairs[0])
        return
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(worker, *pair) for pair in pairs]
        for fut in futures:
            fut.result()


def _out_path(base: str, s: float, r: float, multiple: bool) -> str:
    if not multiple:
        return base
    stem = Path(base)
    return str(stem.with_name(f"{stem.stem}_s{s:g}_r{r:g}{stem.suffix}"))


def _common_numeric(ns, config):
    s_list = _resolve(ns, config, "s", _floats_list)
    r_list = _resolve(ns, config, "r", _floats_list)
    if s_list is None or r_list is None:
        raise ValueError("both --s and --r are required")
    alpha = _resolve(ns, config, "alpha", float)
    if alpha is None:
        raise ValueError("--alpha is required")
    tol = _resolve(ns, config, "tol", float, _default_tol())
    t_max = _resolve(ns, config, "t_max", float)
    if t_max is None:
        raise ValueError("--t-max is required")
    n_points = _resolve(ns, config, "n", int, 200)
    time_axis = _resolve(ns, config, "time_axis", str, "omega0")
    if time_axis not in ("omega0", "omegac"):
        raise ValueError("time-axis must be omega0 or omegac")
    out = _resolve(ns, config, "out", str)
    if out is None:
        raise ValueError("--out is required")
    workers = _resolve(ns, config, "workers", int, os.cpu_count() or 1)
    return s_list, r_list, alpha, tol, t_max, n_points, time_axis, out, workers


def cmd_rates(ns, config) -> int:
    s_list, r_list, alpha, tol, t_max, n_pts, axis, out, workers = \
        _common_numeric(ns, config)
    temp = _temperature(ns, config)
    multiple = len(s_list) * len(r_list) > 1

    def worker(s, r):
        p = SpectrumParams(s, alpha, r)
        trace = rate_trace(p, temp, t_max, n_pts, tol)
        t_col = trace.times * (r if axis == "omegac" else 1.0)
        high_t = temp.mode is TemperatureMode.HIGH_T
        if high_t and alpha > 0 and temp.theta > 0:
            dbar = [(d / (2 * alpha**2 * temp.theta)) for d in trace.delta]
        else:
            dbar = [""] * trace.times.size
        _write_csv(_out_path(out, s, r, multiple),
                   ["t", "delta", "gamma", "lambda_up", "lambda_down",
                    "delta_bar"],
                   [t_col, trace.delta, trace.gamma, trace.lambda_up,
                    trace.lambda_down, dbar])

    _fan_out([(s, r) for s in s_list for r in r_list], worker, workers)
    return EXIT_OK


def cmd_heating(ns, config) -> int:
    s_list, r_list, alpha, tol, t_max, n_pts, axis, out, workers = \
        _common_numeric(ns, config)
    temp = _temperature(ns, config)
    n0 = _resolve(ns, config, "n0", float, 0.0)
    modes_text = _resolve(ns, config, "modes", str, ",".join(_HEATING_MODES))
    modes = [m.strip() for m in modes_text.split(",") if m.strip()]
    for m in modes:
        if m not in _HEATING_MODES:
            raise ValueError(f"unknown heating mode {m!r}; pick from "
                             f"{', '.join(_HEATING_MODES)}")
    heat_tol = max(tol, 1e-10)
    multiple = len(s_list) * len(r_list) > 1

    def worker(s, r):
        p = SpectrumParams(s, alpha, r)
        grid = _grid(t_max, n_pts)
        size = grid.size
        cols = {name: [""] * size for name in
                ("n_exact", "n_markov", "n_short_full", "n_short_highT")}
        if "exact" in modes:
            cols["n_exact"] = heating_exact(n0, p, temp, grid, heat_tol).n_exact
        if "markov" in modes:
            cols["n_markov"] = heating_markov(n0, p, temp, grid)
        if "short-full" in modes:
            cols["n_short_full"] = heating_short_time(p, temp, grid, "full",
                                                      heat_tol)
        if "short-hight" in modes:
            cols["n_short_highT"] = heating_short_time(p, temp, grid, "highT",
                                                       heat_tol)
        t_col = grid * (r if axis == "omegac" else 1.0)
        _write_csv(_out_path(out, s, r, multiple),
                   ["t", "n_exact", "n_markov", "n_short_full",
                    "n_short_highT"],
                   [t_col, cols["n_exact"], cols["n_markov"],
                    cols["n_short_full"], cols["n_short_highT"]])

    _fan_out([(s, r) for s in s_list for r in r_list], worker, workers)
    return EXIT_OK


def cmd_thermtime(ns, config) -> int:
    out = _resolve(ns, config, "out", str)
    if out is None:
        raise ValueError("--out is required")
    r_min = _resolve(ns, config, "r_min", float, 0.05)
    r_max = _resolve(ns, config, "r_max", float, 10.0)
    n_pts = _resolve(ns, config, "n", int, 200)
    if not (0 < r_min < r_max):
        raise ValueError("need 0 < r-min < r-max")
    if not (2 <= n_pts <= 10**6):
        raise ValueError("n must lie in [2, 1000000]")
    spacing = _resolve(ns, config, "spacing", str, "log")
    if spacing == "log":
        grid = np.exp(np.linspace(math.log(r_min), math.log(r_max), n_pts))
    elif spacing == "linear":
        grid = np.linspace(r_min, r_max, n_pts)
    else:
        raise ValueError("spacing must be log or linear")
    cols = {s: [thermalization_time_normalized(SpectrumParams(s, 1.0, r))
                for r in grid] for s in (0.5, 1.0, 3.0)}
    _write_csv(out, ["r", "ttilde_sub", "ttilde_ohmic", "ttilde_super"],
               [grid, cols[0.5], cols[1.0], cols[3.0]])
    return EXIT_OK


def cmd_fockcheck(ns, config) -> int:
    s_list, r_list, alpha, tol, t_max, n_pts, _axis, out, _workers = \
        _common_numeric(ns, config)
    if len(s_list) != 1 or len(r_list) != 1:
        raise ValueError("fockcheck takes a single s and r")
    temp = _temperature(ns, config)
    n0 = _resolve(ns, config, "n0", float, 0.0)
    dim = _resolve(ns, config, "dim", int)
    if dim is None or dim < 2:
        raise ValueError("--dim >= 2 is required")
    if n0 != int(n0) or not (0 <= int(n0) < dim):
        raise ValueError("fockcheck needs an integer n0 inside the truncation")
    p = SpectrumParams(s_list[0], alpha, r_list[0])
    grid = _grid(t_max, n_pts)
    heat_tol = max(tol, 1e-10)
    trace = heating_exact(n0, p, temp, grid, heat_tol)
    snaps, diags = evolve(fock_state(int(n0), dim), p, temp, grid,
                          tol=min(heat_tol, 1e-9))
    n_fock = np.array([mean_n(s) for s in snaps])
    max_dev = float(np.max(np.abs(n_fock - trace.n_exact)))
    report = {
        "pass": bool(max_dev <= 1e-6 and not diags.truncation_flag),
        "max_abs_dev": max_dev,
        "min_eigenvalue": float(diags.min_eigenvalue.min()),
        "trace_drift": float(diags.trace_drift),
        "truncation_flag": bool(diags.truncation_flag),
        "dim": dim,
        "s": p.s, "alpha": p.alpha, "r": p.r,
        "temperature_mode": temp.mode.value, "theta": temp.theta,
        "t_max": float(t_max), "n_points": int(grid.size),
    }
    with open(out, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--s", help="spectral exponent(s), comma separated")
    sub.add_argument("--r", help="resonance parameter(s), comma separated")
    sub.add_argument("--alpha", type=float, help="coupling strength")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--zero-t", dest="temp_mode", action="store_const",
                       const="zero", help="zero-temperature reservoir")
    group.add_argument("--high-t", dest="high_theta", type=float,
                       metavar="THETA", help="high-T approximation at theta")
    group.add_argument("--exact-t", dest="exact_theta", type=float,
                       metavar="THETA", help="exact Bose-Einstein at theta")
    sub.add_argument("--t-max", dest="t_max", type=float)
    sub.add_argument("--n", type=int, help="number of grid points")
    sub.add_argument("--tol", type=float,
                     help="quadrature tolerance (default QBM_TOL or 1e-10)")
    sub.add_argument("--time-axis", dest="time_axis",
                     choices=("omega0", "omegac"),
                     help="emit t in oscillator or cutoff units")
    sub.add_argument("--out", help="output file path")
    sub.add_argument("--config", help="key = value configuration file")
    sub.add_argument("--workers", type=int,
                     help="worker pool size for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbm",
        description="Damped-oscillator reservoir toolkit: decay rates, "
                    "heating dynamics and Fock-space validation.")
    subs = parser.add_subparsers(dest="command", required=True)

    rates = subs.add_parser("rates", help="rate traces Delta, gamma and the "
                                          "two channel rates")
    _add_common(rates)

    heat = subs.add_parser("heating", help="heating function traces")
    _add_common(heat)
    heat.add_argument("--n0", type=float, help="initial occupation")
    heat.add_argument("--modes", help="comma subset of exact,markov,"
                                      "short-full,short-hight")

    therm = subs.add_parser("thermtime", help="normalized thermalization "
                                              "times over an r grid")
    therm.add_argument("--r-min", dest="r_min", type=float)
    therm.add_argument("--r-max", dest="r_max", type=float)
    therm.add_argument("--n", type=int)
    therm.add_argument("--spacing", choices=("log", "linear"))
    therm.add_argument("--out")
    therm.add_argument("--config")

    fock = subs.add_parser("fockcheck", help="validate heating against a "
                                             "truncated Fock-space run")
    _add_common(fock)
    fock.add_argument("--n0", type=float)
    fock.add_argument("--dim", type=int, help="Fock truncation dimension")

    return parser


_COMMANDS = {
    "rates": cmd_rates,
    "heating": cmd_heating,
    "thermtime": cmd_thermtime,
    "fockcheck": cmd_fockcheck,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if getattr(ns, "high_theta", None) is not None:
        ns.temp_mode = "high"
        ns.theta = ns.high_theta
    elif getattr(ns, "exact_theta", None) is not None:
        ns.temp_mode = "exact"
        ns.theta = ns.exact_theta
    try:
        config = _load_config(ns.config) if getattr(ns, "config", None) else {}
        return _COMMANDS[ns.command](ns, config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, ClosedFormError) as exc:
        at = getattr(exc, "t", None)
        where = f" (at t = {at:g})" if at is not None else ""
        print(f"numeric failure{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except TruncationError as exc:
        print(f"truncation failure: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION


if __name__ == "__main__":
    sys.exit(main())
