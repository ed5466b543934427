#!/usr/bin/env python3
"""Generate a synthetic monthly-style suite and run the full model
comparison: all five extension variants plus the single-SVR baseline,
replicated, scored by SMAPE/MASE, compared by ANOVA and Tukey HSD.

Equivalent CLI:
    emdcast synth --out series.csv ...
    emdcast experiment --input series.csv --out report ...
"""

import argparse
import time

from emdcast import harness
from emdcast.forecast import FitConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="experiment_out")
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--length", type=int, default=126)
    ap.add_argument("--holdout", type=int, default=18)
    ap.add_argument("--replications", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--noise", type=float, default=0.8)
    ap.add_argument("--pso-swarm", type=int, default=5)
    ap.add_argument("--pso-iterations", type=int, default=6)
    ap.add_argument("--cv-folds", type=int, default=3)
    ap.add_argument("--pmi-permutations", type=int, default=30)
    args = ap.parse_args()

    data = harness.synth_series(args.count, args.length, args.seed,
                                noise_scale=args.noise)
    series_path = f"{args.out}_series.csv"
    harness.write_series_csv(data, series_path)

    cfg = harness.ExperimentConfig(
        input_path=series_path, output_path=args.out,
        holdout=args.holdout, horizons=(1, args.holdout),
        replications=args.replications, seed=args.seed,
        fit=FitConfig(pso_swarm=args.pso_swarm,
                      pso_iterations=args.pso_iterations,
                      cv_folds=args.cv_folds,
                      pmi_permutations=args.pmi_permutations))
    t0 = time.time()
    records, reports, stats, origin_rows = harness.run_experiment(cfg)
    paths = harness.emit_report(records, reports, stats, origin_rows,
                                cfg.output_path, cfg.format)
    failed = sum(r.failed for r in records)
    print(f"{len(records)} runs, {failed} failed, {time.time()-t0:.0f}s")
    for rp in reports:
        print(f"  {rp.model:>9} H={rp.horizon:<3} "
              f"SMAPE {rp.smape_mean:7.3f} +- {rp.smape_std:6.3f}  "
              f"MASE {rp.mase_mean:6.3f} +- {rp.mase_std:6.3f}")
    for entry in stats:
        if "rank_chain" in entry:
            print(f"  H={entry['horizon']} {entry['metric'].upper()}: "
                  f"{entry['rank_chain']}")
    print("reports:", ", ".join(str(p) for p in paths.values()))


if __name__ == "__main__":
    main()
