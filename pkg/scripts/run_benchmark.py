"""Synthesize the 7-activity corpus and run the reference benchmark rows on it.

    python3 scripts/run_benchmark.py --seconds 60 --seed 0 --records bench.jsonl
"""
import argparse
import logging

import numpy as np

from phonehar.evaluation import render_table, run_benchmark, table3_plan, write_records
from phonehar.features import FeatureDataset, featurize
from phonehar.ingest import Activity, SynthParams, synthesize


def corpus(seconds: float, seed: int) -> FeatureDataset:
    params = SynthParams(seed=seed)
    parts = [featurize(synthesize(a, seconds, params)) for a in Activity]
    return FeatureDataset(np.vstack([p.X for p in parts]), np.concatenate([p.labels for p in parts]))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seconds", type=float, default=60.0, help="seconds per activity")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--fresh-split", action="store_true")
    ap.add_argument("--records", default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)

    data = corpus(args.seconds, args.seed)
    print(f"{len(data)} windows, {args.seconds:g} s per activity, seed {args.seed}\n")
    reports = run_benchmark(table3_plan(args.seed), data, args.seed, fresh_split=args.fresh_split)
    print(render_table(reports))
    if args.records:
        write_records(reports, args.records)


if __name__ == "__main__":
    main()
