"""Command-line interface: synth, decompose, forecast, experiment."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import forecast as fc
from . import harness
from .emd import SiftingConfig, decompose
from .forecast import FitConfig
from .series import split_holdout


def _read_config_file(path) -> dict:
    """Flat key=value (or key: value) text; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, val = line.split("=", 1)
            elif ":" in line:
                key, val = line.split(":", 1)
            else:
                raise ValueError(f"{path}: cannot parse line {line!r}")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _fit_config(ns) -> FitConfig:
    return FitConfig(max_lag=ns.max_lag, pso_swarm=ns.pso_swarm,
                     pso_iterations=ns.pso_iterations, cv_folds=ns.cv_folds,
                     pmi_permutations=ns.pmi_permutations)


def _add_fit_flags(p):
    p.add_argument("--max-lag", type=int, default=12)
    p.add_argument("--pso-swarm", type=int, default=10)
    p.add_argument("--pso-iterations", type=int, default=50)
    p.add_argument("--cv-folds", type=int, default=10)
    p.add_argument("--pmi-permutations", type=int, default=100)


def _pick_series(data, series_id):
    if series_id is None:
        return data[0]
    for sid, s in data:
        if sid == series_id:
            return sid, s
    raise SystemExit(f"series {series_id!r} not found")


def cmd_synth(ns):
    data = harness.synth_series(ns.count, ns.length, ns.seed,
                                seasonal_amp=ns.seasonal_amp, trend=ns.trend,
                                noise_scale=ns.noise)
    harness.write_series_csv(data, ns.out)
    print(f"wrote {len(data)} series to {ns.out}")


def cmd_decompose(ns):
    data = harness.load_series(ns.input)
    sid, s = _pick_series(data, ns.series_id)
    d = decompose(s, SiftingConfig(ns.end_condition))
    with open(ns.out, "w", newline="\n") as fh:
        names = [f"imf{i.index}" for i in d.imfs] + ["residue"]
        fh.write("t," + ",".join(names) + "\n")
        cols = [i.values for i in d.imfs] + [d.residue]
        for t in range(len(s)):
            fh.write(str(t) + "," + ",".join(harness._fmt(c[t]) for c in cols)
                     + "\n")
    print(f"{sid}: {len(d.imfs)} IMFs + residue -> {ns.out}")


def cmd_forecast(ns):
    data = harness.load_series(ns.input)
    sid, s = _pick_series(data, ns.series_id)
    ec = None if ns.model == "svr" else ns.model
    model = fc.fit(s, ec, seed=ns.seed, config=_fit_config(ns))
    preds = fc.forecast(model, s, ns.horizon)
    for step, p in enumerate(preds, start=1):
        print(f"{sid},{step},{harness._fmt(p)}")


def cmd_experiment(ns):
    cfg = harness.ExperimentConfig(
        input_path=ns.input, output_path=ns.out, holdout=ns.holdout,
        horizons=tuple(int(h) for h in ns.horizons.split(",")),
        replications=ns.replications,
        models=tuple(ns.models.split(",")), seed=ns.seed, format=ns.format,
        workers=ns.workers, fit=_fit_config(ns))
    records, reports, stats, origin_rows = harness.run_experiment(cfg)
    paths = harness.emit_report(records, reports, stats, origin_rows,
                                cfg.output_path, cfg.format)
    failed = sum(r.failed for r in records)
    print(f"{len(records)} runs ({failed} failed); reports:")
    for name, p in paths.items():
        print(f"  {name}: {p}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emdcast",
        description="decomposition-and-ensemble time series forecasting")
    parser.add_argument("--config", help="flat key=value config file; "
                        "command-line flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic series CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--length", type=int, default=126)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seasonal-amp", type=float, default=0.3)
    p.add_argument("--trend", type=float, default=0.3)
    p.add_argument("--noise", type=float, default=0.8)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("decompose", help="emit the IMFs of one series")
    p.add_argument("--input", required=True)
    p.add_argument("--series-id")
    p.add_argument("--end-condition", default="rato",
                   choices=sorted(set(harness.MODEL_CHOICES) - {"svr"}))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("forecast", help="fit one model and print forecasts")
    p.add_argument("--input", required=True)
    p.add_argument("--series-id")
    p.add_argument("--model", default="rato", choices=harness.MODEL_CHOICES)
    p.add_argument("--horizon", type=int, default=18)
    p.add_argument("--seed", type=int, default=0)
    _add_fit_flags(p)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("experiment", help="full replication experiment")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--holdout", type=int, default=18)
    p.add_argument("--horizons", default="1,18")
    p.add_argument("--replications", type=int, default=50)
    p.add_argument("--models", default=",".join(harness.MODEL_CHOICES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--workers", type=int, default=1)
    _add_fit_flags(p)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = build_parser()
    # a config file provides defaults; explicit flags override
    if argv is None:
        argv = sys.argv[1:]
    ns, _ = parser.parse_known_args(argv)
    if ns.config:
        file_opts = _read_config_file(ns.config)
        defaults = {}
        for key, val in file_opts.items():
            defaults[key] = val
        for action in parser._subparsers._group_actions[0].choices[
                ns.command]._actions:
            if action.dest in defaults and action.type:
                defaults[action.dest] = action.type(defaults[action.dest])
        parser._subparsers._group_actions[0].choices[ns.command].set_defaults(
            **defaults)
        ns = parser.parse_args(argv)
    ns.func(ns)


if __name__ == "__main__":
    main()
