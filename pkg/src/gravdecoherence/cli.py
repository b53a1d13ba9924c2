"""Command-line runner for scenario files.

Usage::

    gravdecoherence run scenario.json --out results/
    gravdecoherence sweep scenario.json --param dx --values 0.1,1,10 --out results/

Exit status: 0 on success, 2 for unreadable or invalid input, 3 when the
physics is degenerate (vanishing internal trace or no redshift difference).
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from . import __version__
from .coherence import decompose, revival_period, visibility, visibility_trace
from .config import ConfigError, Scenario, build_scenario, config_hash, load_config, regime_warnings
from .constants import CONSTANTS, c
from .errors import DegenerateStateError, InvalidArgumentError, NoDephasingError
from .metric import redshift_difference
from .thermal import local_heat_capacity, thermal_family, thermal_tau2, tau2_weak_field_estimate
from .timescales import decoherence_timescales, expand_visibility, moments_at_coincidence

SWEEP_PARAMS = {"dx": "dx", "delta_x": "dx", "T_global": "T_global", "T": "T_global",
                "g": "g", "epsilon": "epsilon", "eps": "epsilon"}

SUMMARY_ORDER = (
    "scenario_hash", "state_kind", "x", "x_prime", "redshift_difference",
    "t0", "abs_gamma_at_t0",
    "E_Dchi", "delta_E", "moments_source", "slope_linear", "curvature",
    "t1", "t2", "tau1", "tau2", "validity_radius",
    "tau2_exact", "tau2_weakfield", "C", "T_local",
)


def _fmt(v) -> str:
    if v is None:
        return "absent"
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def _moments(sc: Scenario):
    """Moments at coincidence, from the thermal family when one exists."""
    if sc.thermal is not None:
        th = sc.thermal
        fam = thermal_family(th.T_global, sc.profile, sc.spectrum, th.A0)
        e_dchi, delta_e = moments_at_coincidence(fam, sc.x)
        return e_dchi, delta_e, "thermal_family"
    # one-sided difference from coincidence, where chi_n vanishes
    dec = decompose(sc.state)
    E = sc.spectrum.levels
    dx = sc.x_prime - sc.x
    e_dchi = float(np.sum(E * dec.weights * dec.phases)) / dx
    mean = float(np.sum(dec.weights * E))
    delta_e = math.sqrt(float(np.sum(dec.weights * (E - mean) ** 2)))
    return e_dchi, delta_e, "pair_weights"


def analyze(sc: Scenario) -> dict:
    """Scalar results of every requested analysis, keyed by summary field."""
    out = {
        "scenario_hash": sc.digest,
        "state_kind": sc.state_kind,
        "x": sc.x,
        "x_prime": sc.x_prime,
        "redshift_difference": float(redshift_difference(sc.profile, sc.x, sc.x_prime)),
    }
    decompose(sc.state)  # raises on a degenerate state before anything else
    wanted = set(sc.analyses)
    if "period" in wanted or "timescales" in wanted:
        t0 = revival_period(sc.state, sc.profile)
        if "period" in wanted:
            out["t0"] = t0
            out["abs_gamma_at_t0"] = None if t0 is None else abs(visibility(sc.state, sc.profile, t0))
    if "timescales" in wanted:
        e_dchi, delta_e, source = _moments(sc)
        rep = decoherence_timescales(sc.profile, sc.x, sc.x_prime, e_dchi, delta_e, state=sc.state)
        out.update(rep.as_dict())
        out["moments_source"] = source
    if "thermal" in wanted:
        th = sc.thermal
        C = local_heat_capacity(th)
        out["tau2_exact"] = thermal_tau2(th)
        g_eff = c**2 * float(sc.profile.Df(sc.x))
        dx = abs(sc.x_prime - sc.x)
        out["tau2_weakfield"] = (tau2_weak_field_estimate(th.T_local, C, abs(g_eff), dx)
                                 if C > 0 and g_eff != 0 and dx > 0 else None)
        out["C"] = C
        out["T_local"] = th.T_local
    return out


def summary_text(results: dict) -> str:
    return "".join(f"{k} = {_fmt(results[k])}\n" for k in SUMMARY_ORDER if k in results)


def expansion_csv(sc: Scenario, times) -> str:
    buf = io.StringIO()
    buf.write(f"# scenario_hash={sc.digest}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "abs_gamma_sq", "quadratic", "remainder"])
    exact = np.abs(visibility(sc.state, sc.profile, times)) ** 2
    model = expand_visibility(sc.state, sc.profile, times)
    for row in zip(times, exact, model, exact - model):
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def manifest(sc: Scenario, outputs: list) -> dict:
    return {
        "manifest_version": 1,
        "artifact": "gravdecoherence",
        "artifact_version": __version__,
        "config_hash": sc.digest,
        "config": sc.raw,
        "constants": CONSTANTS.as_dict(),
        "outputs": outputs,
    }


def _write(path: str, text: str):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def run(config_path: str, out_dir: str = ".", quiet: bool = False) -> int:
    try:
        sc = build_scenario(load_config(config_path))
    except (ConfigError, InvalidArgumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for msg in regime_warnings(sc.scales):
        print(f"warning: {msg}", file=sys.stderr)
    try:
        results = analyze(sc)
        times = sc.time.times()
        trace = visibility_trace(sc.state, sc.profile, times) if "trace" in sc.analyses else None
        expansion = expansion_csv(sc, times) if "expansion" in sc.analyses else None
    except (DegenerateStateError, NoDephasingError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    os.makedirs(out_dir, exist_ok=True)
    outputs = []
    if trace is not None:
        _write(os.path.join(out_dir, "trace.csv"), trace.to_csv(scenario_hash=sc.digest))
        outputs.append("trace.csv")
    if expansion is not None:
        _write(os.path.join(out_dir, "expansion.csv"), expansion)
        outputs.append("expansion.csv")
    text = summary_text(results)
    _write(os.path.join(out_dir, "summary.txt"), text)
    outputs.append("summary.txt")
    outputs.append("manifest.json")
    _write(os.path.join(out_dir, "manifest.json"),
           json.dumps(manifest(sc, outputs), indent=2, sort_keys=True) + "\n")
    if not quiet:
        sys.stdout.write(text)
    return 0


def _apply(raw: dict, param: str, value: float) -> dict:
    raw = copy.deepcopy(raw)
    if param == "dx":
        x = raw["x"]["value"] if isinstance(raw["x"], dict) else raw["x"]
        unit = raw["x"].get("unit", "m") if isinstance(raw["x"], dict) else "m"
        raw["x_prime"] = {"value": x + value, "unit": unit} if unit != "m" else x + value
    elif param == "T_global":
        if raw.get("state", {}).get("kind") != "thermal":
            raise ConfigError("state.kind", "sweeping T_global needs a thermal state")
        raw["state"]["T_global"] = value
    elif param == "g":
        if raw.get("profile", {}).get("kind") != "weak_field":
            raise ConfigError("profile.kind", "sweeping g needs a weak_field profile")
        raw["profile"]["g"] = value
    elif param == "epsilon":
        if raw.get("spectrum", {}).get("kind") != "harmonic":
            raise ConfigError("spectrum.kind", "sweeping epsilon needs a harmonic spectrum")
        raw["spectrum"]["quantum"] = value
    return raw


def sweep_rows(raw: dict, param: str, values) -> list:
    """One ``{value, tau2, t0, validity_radius}`` row per parameter value."""
    if param not in SWEEP_PARAMS:
        raise ConfigError("param", f"unknown sweep parameter {param!r}; expected one of {sorted(SWEEP_PARAMS)}")
    param = SWEEP_PARAMS[param]
    rows = []
    for v in values:
        if not (math.isfinite(v) and v > 0):
            raise ConfigError("values", f"sweep values must be finite and positive, got {v!r}")
        sc = build_scenario(_apply(raw, param, v))
        if "timescales" not in sc.analyses:
            sc.analyses = sc.analyses + ("timescales",)
        res = analyze(sc)
        tau2 = thermal_tau2(sc.thermal) if sc.thermal is not None else res["tau2"]
        rows.append({"value": v, "tau2": tau2, "t0": revival_period(sc.state, sc.profile),
                     "validity_radius": res["validity_radius"]})
    return rows


def sweep(config_path: str, param: str, values, out_dir: str = ".", quiet: bool = False) -> int:
    try:
        raw = load_config(config_path)
        build_scenario(raw)
        rows = sweep_rows(raw, param, values)
    except (ConfigError, InvalidArgumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateStateError, NoDephasingError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    buf = io.StringIO()
    buf.write(f"# scenario_hash={config_hash(raw)} param={param}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["value", "tau2", "t0", "validity_radius"])
    for r in rows:
        w.writerow([_fmt(r[k]) for k in ("value", "tau2", "t0", "validity_radius")])
    os.makedirs(out_dir, exist_ok=True)
    _write(os.path.join(out_dir, "sweep.csv"), buf.getvalue())
    if not quiet:
        sys.stdout.write(buf.getvalue())
    return 0


def _parse_values(text: str):
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(prog="gravdecoherence",
                                     description="Gravitational dephasing of delocalized internal states.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate one scenario file")
    p_run.add_argument("config")
    p_sweep = sub.add_parser("sweep", help="repeat a scenario over a parameter")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--param", required=True, help="dx, T_global, g or epsilon")
    p_sweep.add_argument("--values", required=True, type=_parse_values)
    for p in (p_run, p_sweep):
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--quiet", action="store_true")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, args.out, args.quiet)
    return sweep(args.config, args.param, args.values, args.out, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
