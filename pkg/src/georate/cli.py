"""Batch command-line front end.

Every verb accepts ``--config FILE`` with a JSON object whose keys mirror
the long flag names (dashes become underscores). Flags given on the command
line override the file. Exit codes: 0 success, 1 configuration error,
2 numerical failure (including a failed verification criterion).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import run_all
from .errors import ConfigError, ContractError, CutLocusError, GeorateError, NumericalError
from .experiments import ExperimentConfig, run_experiment
from .increments import parse_law
from .io import dumps, load_json, table_to_csv, write_json, write_path
from .manifold import parse_manifold
from .rates import RateProblem, psi, psi_star, rate_k, rate_manifold, rate_proj
from .walk import run_walks


class UsageError(ConfigError):
    def __init__(self, message, usage=""):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


def _floats(text) -> list[float]:
    """``"1,2"`` or ``[1, 2]`` or ``3`` -> list of floats."""
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        try:
            return [float(t) for t in text]
        except (TypeError, ValueError):
            raise ConfigError(f"expected a list of numbers, got {text!r}") from None
    try:
        return [float(t) for t in str(text).split(",") if t.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise ConfigError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _resolve(args, keys: dict) -> dict:
    """Defaults, then the ``--config`` file, then explicit flags."""
    cfg = dict(keys)
    if getattr(args, "config", None):
        data = load_json(args.config)
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config}: expected a JSON object")
        unknown = sorted(set(data) - set(keys))
        if unknown:
            raise ConfigError(f"{args.config}: unknown keys {', '.join(unknown)}")
        cfg.update(data)
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj))


# -- verbs ---------------------------------------------------------------------


def cmd_simulate(args) -> int:
    cfg = _resolve(args, {"manifold": None, "law": None, "n": None, "seed": 0, "x0": None, "output": "walk"})
    for key in ("manifold", "law", "n"):
        if cfg[key] is None:
            raise ConfigError(f"simulate needs --{key}")
    manifold = parse_manifold(cfg["manifold"])
    law = parse_law(cfg["law"], dim=manifold.dim)
    n = int(cfg["n"])
    seed = int(cfg["seed"])
    x0 = manifold.origin() if cfg["x0"] is None else manifold.check_point(np.array(_floats(cfg["x0"])))
    path = run_walks(manifold, law, n, x0, seed, 1)[0]
    base = Path(cfg["output"])
    if base.suffix in (".csv", ".json"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_file, manifest = base.with_suffix(".csv"), base.with_suffix(".json")
    resolved = {**cfg, "manifold": manifold.spec(), "law": law.spec(), "x0": x0.tolist()}
    write_path(path, csv_file, manifest, {"config": resolved})
    _emit({"csv": str(csv_file), "manifest": str(manifest), "n": n, "seed": seed, "endpoint": path.endpoint})
    return 0


def cmd_rate(args) -> int:
    cfg = _resolve(args, {"law": None, "manifold": None, "x0": None, "x": None, "v": None, "k": None})
    if cfg["law"] is None:
        raise ConfigError("rate needs --law")
    out = {}
    if cfg["k"] is not None:
        if cfg["v"] is None:
            raise ConfigError("rate --k needs --v")
        law = parse_law(cfg["law"], dim=1)
        cfg["v"] = _floats(cfg["v"])
        out.update(op="rate_k", value=rate_k(law, int(cfg["k"]), cfg["v"]))
    elif cfg["x"] is not None:
        if cfg["manifold"] is None:
            raise ConfigError("rate --x needs --manifold")
        manifold = parse_manifold(cfg["manifold"])
        law = parse_law(cfg["law"], dim=manifold.dim)
        x0 = manifold.origin() if cfg["x0"] is None else manifold.check_point(np.array(_floats(cfg["x0"])))
        x = manifold.check_point(np.array(_floats(cfg["x"])))
        cfg.update(manifold=manifold.spec(), x0=x0, x=x)
        out.update(op="rate_manifold", value=rate_manifold(RateProblem(law), manifold, x0, x))
    elif cfg["v"] is not None:
        cfg["v"] = _floats(cfg["v"])
        law = parse_law(cfg["law"], dim=len(cfg["v"]))
        out.update(op="psi_star", **psi_star(RateProblem(law), cfg["v"]).to_dict())
    else:
        raise ConfigError("rate needs --v (vector rate) or --x (manifold rate)")
    cfg["law"] = law.spec()
    out["config"] = cfg
    _emit(out)
    return 0


def cmd_psi(args) -> int:
    cfg = _resolve(args, {"law": None, "lambda": None})
    if cfg["law"] is None or cfg["lambda"] is None:
        raise ConfigError("psi needs --law and --lambda")
    probes = cfg["lambda"]
    single = not isinstance(probes, list) or not probes or not isinstance(probes[0], (list, str))
    probes = [probes] if single else probes
    vecs = [_floats(p) for p in probes]
    law = parse_law(cfg["law"], dim=len(vecs[0]))
    p = RateProblem(law)
    values = [float(psi(p, v)) for v in vecs]
    cfg = {**cfg, "law": law.spec(), "lambda": vecs}
    out = {"config": cfg, "op": "psi", "lambda": vecs, "values": values}
    if len(values) == 1:
        out["value"] = values[0]
    _emit(out)
    return 0


PROJ_COLUMNS = ["k", "c", "rate_k", "k_rate_proj", "abs_diff"]


def cmd_proj_compare(args) -> int:
    cfg = _resolve(args, {"law": "poisson1", "k": [2, 3], "c": [0.5, 1.0, 2.0], "output": None})
    law = parse_law(cfg["law"], dim=1)
    if law.dim != 1:
        raise ConfigError("proj-compare needs a one-dimensional law")
    rows = []
    for k in _ints(cfg["k"]):
        for c in _floats(cfg["c"]):
            ik = rate_k(law, k, np.full(k, c))
            ip = k * rate_proj(law, k, np.full(k, c / np.sqrt(k)))
            rows.append({"k": k, "c": c, "rate_k": ik, "k_rate_proj": ip, "abs_diff": abs(ik - ip)})
    text = table_to_csv(rows, PROJ_COLUMNS)
    if cfg["output"]:
        Path(cfg["output"]).write_text(text)
    sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    cfg = _resolve(args, {"only": None, "output": None})
    only = None if cfg["only"] is None else set(_ints(cfg["only"]))
    results = run_all(only=only, echo=lambda line: print(line, flush=True))
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    if cfg["output"]:
        write_json(
            cfg["output"],
            {
                "config": cfg,
                "passed": ok,
                "criteria": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            },
        )
    return 0 if ok else 2


_EXPERIMENT_FLAGS = {
    "experiment": str,
    "name": str,
    "manifold": str,
    "law": str,
    "n": _ints,
    "m": _ints,
    "trials": int,
    "master_seed": int,
    "lambdas": _floats,
    "ks": _ints,
    "scales": _floats,
    "ls": _ints,
    "x0": _floats,
    "center": _floats,
    "radius": float,
    "threshold": float,
    "mc_trials": int,
    "grid": int,
    "tolerance": float,
    "coverage": float,
    "output": str,
    "threads": int,
}


def cmd_experiment(args) -> int:
    data = {}
    if args.config:
        data = load_json(args.config)
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config}: expected a JSON object")
    for key in _EXPERIMENT_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if args.exact:
        data["exact"] = True
    cfg = ExperimentConfig.from_dict(data)
    result = run_experiment(cfg)
    _emit(result.summary)
    return 0 if result.summary["passed"] else 2


# -- parser --------------------------------------------------------------------

_SIMULATE_HELP = """\
Writes OUTPUT.csv with columns step, point_0..point_{D-1}, incr_0..incr_{D-1},
weight (increment and weight are empty at step 0), and OUTPUT.json with the
manifold, law, seed, start point and resolved config."""

_EXPERIMENT_HELP = """\
Writes OUTPUT.csv and OUTPUT.json (summary with pass/fail per criterion).
CSV columns by experiment:
  corollary_sweep:     n, seed, lambda, k, exact_log_mgf, psi_over_k, abs_err, overflow
  exhaustive_oracle:   n, seed, threshold, exact, mc_estimate, mc_hits, mc_trials, se, z, within_3se
  discrepancy_scaling: r_scale, l, median_discrepancy, q95_discrepancy, max_discrepancy,
                       median_feature, ls_residual_rms, covered_fraction, master_seed,
                       first_trial, last_trial
  ball_probability:    n, seed, method, trials, hits, p_hat, empirical_rate, censored,
                       rate_lower_bound, reference_rate
The thread cap defaults to $GEORATE_THREADS, else 1."""


def build_parser() -> _Parser:
    parser = _Parser(prog="georate", description="Weighted geodesic random walks and their rate functions.")
    parser.add_argument("--version", action="version", version=f"georate {__version__}")
    sub = parser.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    fmt = argparse.RawDescriptionHelpFormatter

    p = sub.add_parser("simulate", help="simulate one walk", epilog=_SIMULATE_HELP, formatter_class=fmt)
    p.add_argument("--config")
    p.add_argument("--manifold", help="e.g. sphere:2:1, hyperbolic:2, euclidean:3")
    p.add_argument("--law", help="e.g. shell:1, ball:0.5, rademacher:1")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--x0", help="start point, comma separated (default: the model origin)")
    p.add_argument("--output", help="output path stem (default: walk)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "rate",
        help="evaluate a rate function",
        epilog="Prints JSON with op, value and the resolved config.",
        formatter_class=fmt,
    )
    p.add_argument("--config")
    p.add_argument("--law")
    p.add_argument("--manifold")
    p.add_argument("--x0")
    p.add_argument("--x", help="target point on the manifold")
    p.add_argument("--v", help="tangent vector, comma separated")
    p.add_argument("--k", type=int, help="product of k one-dimensional laws")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("psi", help="evaluate psi", epilog="Prints JSON with lambda and values.", formatter_class=fmt)
    p.add_argument("--config")
    p.add_argument("--law")
    p.add_argument("--lambda", dest="lambda", action="append", help="comma separated; repeatable")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser(
        "proj-compare",
        help="product rate against k times projection rate",
        epilog="Prints CSV with columns " + ", ".join(PROJ_COLUMNS) + ".",
        formatter_class=fmt,
    )
    p.add_argument("--config")
    p.add_argument("--law", help="one-dimensional law (default poisson1)")
    p.add_argument("--k", type=_ints)
    p.add_argument("--c", type=_floats)
    p.add_argument("--output")
    p.set_defaults(func=cmd_proj_compare)

    p = sub.add_parser(
        "verify",
        help="run the acceptance suite",
        epilog="Prints one PASS/FAIL line per criterion; --output writes a JSON report.",
        formatter_class=fmt,
    )
    p.add_argument("--config")
    p.add_argument("--only", type=_ints, help="criterion numbers, comma separated")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run an experiment config", epilog=_EXPERIMENT_HELP, formatter_class=fmt)
    p.add_argument("--config")
    for key, conv in _EXPERIMENT_FLAGS.items():
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=conv)
    p.add_argument("--exact", action="store_true", help="enumerate instead of sampling (ball_probability)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(exc.usage)
        sys.stderr.write(f"georate: error: {exc}\n")
        return 1
    except (ConfigError, ContractError) as exc:
        sys.stderr.write(f"georate: config error: {exc}\n")
        return 1
    except NumericalError as exc:
        sys.stderr.write(f"georate: numerical failure: {exc}\n")
        if exc.diagnostics:
            sys.stderr.write(json.dumps(exc.diagnostics, default=str, indent=2) + "\n")
        return 2
    except (CutLocusError, GeorateError) as exc:
        sys.stderr.write(f"georate: numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
