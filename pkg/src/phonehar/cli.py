"""Command-line entry point: ``phonehar <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import __version__
from .dsp import DEFAULT_FILTER_WIDTH, DEFAULT_STRIDE
from .evaluation import parse_plan_row, render_table, run_benchmark, shuffle_split, evaluate, table3_plan, write_records
from .features import featurize, read_dataset, resolve_subset, select_features, write_dataset
from .ingest import DEFAULT_SAMPLE_RATE_HZ, Activity, ParseError, SynthParams, parse_csv, synthesize_session, write_csv
from .learn import ModelFormatError, load_model, rank_features_info_gain, save_model, train
from .stream import DEFAULT_VOTES, StreamConfig, replay, run_stream, threaded, write_events

log = logging.getLogger("phonehar")


class UsageError(Exception):
    pass


def _default_seed() -> int:
    try:
        return int(os.environ.get("PHONEHAR_SEED", "0"))
    except ValueError:
        return 0


def _odd_width(text: str) -> int:
    value = int(text)
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"filter width must be odd and >= 1, got {value}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _non_negative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"fraction must be in (0, 1), got {text}")
    return value


def _activity(text: str) -> Activity:
    try:
        return Activity.parse(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _features(text: str):
    try:
        return resolve_subset(text)
    except (KeyError, ValueError) as err:
        raise argparse.ArgumentTypeError(str(err.args[0] if err.args else err)) from None


def _add_common(p, seed=True, rate=False, pipeline=False):
    if seed:
        p.add_argument("--seed", type=int, default=_default_seed(),
                       help="seed for all randomness (default: $PHONEHAR_SEED or 0)")
    if rate:
        p.add_argument("--sample-rate", type=_positive_float, default=DEFAULT_SAMPLE_RATE_HZ,
                       help="sample rate of the CSV in Hz (default: 250)")
    if pipeline:
        p.add_argument("--filter-width", type=_odd_width, default=DEFAULT_FILTER_WIDTH,
                       help="median filter width, odd (default: 3)")
        p.add_argument("--stride", type=_positive_int, default=DEFAULT_STRIDE,
                       help="window start stride in samples (default: 8, non-overlapping)")


def _add_classifier(p):
    p.add_argument("--kind", choices=["nb", "tree", "forest", "bagging", "knn"], default="nb",
                   help="classifier kind (default: nb)")
    p.add_argument("--features", type=_features, default=None,
                   help="feature subset: 'all', '@table3:<row>' (1.2, 2.2, 3.2, 4.2, 6.2) or comma-separated names")
    p.add_argument("--max-depth", type=int, default=None, help="tree depth limit (tree/forest/bagging; default 20, 0 = unlimited)")
    p.add_argument("--min-leaf", type=_positive_int, default=None, help="minimum rows per leaf (default 2)")
    p.add_argument("--n-trees", type=_positive_int, default=None, help="forest size (default 100)")
    p.add_argument("--m-features", type=_positive_int, default=None, help="candidate features per forest node (default ceil(sqrt(d)))")
    p.add_argument("--n-bags", type=_positive_int, default=None, help="bagging ensemble size (default 10)")
    p.add_argument("--no-bootstrap", action="store_true", help="train ensemble members on the full training set")
    p.add_argument("-k", "--k", type=_positive_int, default=None, help="neighbours for knn (default 1)")
    p.add_argument("--no-standardize", action="store_true", help="knn: use raw feature scales")


def _hyperparams(args) -> dict:
    kind = args.kind
    hp: dict = {}
    tree_like = kind in ("tree", "forest", "bagging")
    flags = {
        "max_depth": (args.max_depth, tree_like),
        "min_leaf": (args.min_leaf, tree_like),
        "n_trees": (args.n_trees, kind == "forest"),
        "m_features": (args.m_features, kind == "forest"),
        "n_bags": (args.n_bags, kind == "bagging"),
        "k": (args.k, kind == "knn"),
    }
    for key, (value, allowed) in flags.items():
        if value is None:
            continue
        if not allowed:
            raise UsageError(f"--{key.replace('_', '-')} does not apply to --kind {kind}")
        hp[key] = value
    if "max_depth" in hp and hp["max_depth"] <= 0:
        hp["max_depth"] = None
    if kind in ("forest", "bagging"):
        hp["seed"] = args.seed
        if args.no_bootstrap:
            hp["bootstrap"] = False
    elif args.no_bootstrap:
        raise UsageError("--no-bootstrap applies to forest and bagging only")
    if kind == "knn" and args.no_standardize:
        hp["standardize"] = False
    elif args.no_standardize:
        raise UsageError("--no-standardize applies to knn only")
    return hp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phonehar", description="Smartphone accelerometer activity recognition.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("synth", help="generate a labeled synthetic accelerometer CSV")
    p.add_argument("--activity", type=_activity, action="append", required=True,
                   help="activity name or code; repeat for a multi-segment session")
    p.add_argument("--duration", type=_positive_float, action="append", required=True,
                   help="seconds per segment; give once for all segments or once per --activity")
    p.add_argument("-o", "--output", default="-", help="output CSV (default: stdout)")
    _add_common(p, rate=True)

    p = sub.add_parser("featurize", help="median filter, window and extract the 42 features")
    p.add_argument("--input", "-i", required=True, help="accelerometer CSV")
    p.add_argument("-o", "--output", default="-", help="feature CSV (default: stdout)")
    _add_common(p, seed=False, rate=True, pipeline=True)

    p = sub.add_parser("rank", help="rank features by information gain")
    p.add_argument("--data", required=True, help="labeled feature CSV")
    p.add_argument("--top", type=_positive_int, default=None, help="print only the best N")
    p.add_argument("-o", "--output", default="-", help="output (default: stdout)")

    p = sub.add_parser("train", help="train a classifier and save it")
    p.add_argument("--data", required=True, help="labeled feature CSV")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    _add_classifier(p)
    _add_common(p)

    p = sub.add_parser("eval", help="seeded 70/30 split, train and evaluate one classifier")
    p.add_argument("--data", required=True, help="labeled feature CSV")
    p.add_argument("--model", default=None, help="evaluate this saved model on all of --data instead of training")
    p.add_argument("--train-fraction", type=_fraction, default=0.70, help="training share (default: 0.70)")
    p.add_argument("--records", default=None, help="write the JSON-lines report record here")
    _add_classifier(p)
    _add_common(p)

    p = sub.add_parser("bench", help="run a multi-classifier benchmark plan on one shared split")
    p.add_argument("--data", required=True, help="labeled feature CSV")
    p.add_argument("--preset", choices=["table3"], default=None,
                   help="use the built-in reference plan (rows 1.1-5.1)")
    p.add_argument("--row", action="append", default=[],
                   help="plan row 'kind[:key=val,...][/features]', repeatable; e.g. 'forest:n_trees=50/@table3:3.2'")
    p.add_argument("--train-fraction", type=_fraction, default=0.70, help="training share (default: 0.70)")
    p.add_argument("--fresh-split", action="store_true", help="give each row its own split (seed + row index)")
    p.add_argument("--format", choices=["table", "records", "both"], default="table",
                   help="what to print on stdout (default: table)")
    p.add_argument("--records", default=None, help="also write JSON-lines records to this file")
    _add_common(p)

    p = sub.add_parser("stream", help="replay a CSV through a model and emit JSON-lines events")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--input", "-i", required=True, help="accelerometer CSV to replay")
    p.add_argument("--weight", type=_positive_float, required=True, help="body weight in kg")
    p.add_argument("--rate", type=_non_negative_float, default=0.0,
                   help="replay speed multiplier; 1 = real time, 0 = as fast as possible (default: 0)")
    p.add_argument("--votes", type=_positive_int, default=DEFAULT_VOTES, help="classifications per decision (default: 10)")
    p.add_argument("--filter-width", type=_odd_width, default=DEFAULT_FILTER_WIDTH, help="median filter width (default: 3)")
    p.add_argument("--wall-clock", action="store_true", help="use wall time between decisions for calories")
    p.add_argument("-o", "--output", default="-", help="events file (default: stdout)")
    _add_common(p, seed=False, rate=True)
    return parser


def _cmd_synth(args) -> None:
    durations = args.duration
    if len(durations) == 1:
        durations = durations * len(args.activity)
    if len(durations) != len(args.activity):
        raise UsageError("give --duration once or once per --activity")
    params = SynthParams(sample_rate_hz=args.sample_rate, seed=args.seed)
    series = synthesize_session(zip(args.activity, durations), params)
    with _output(args.output) as fh:
        write_csv(series, fh)


class _nullctx:
    def __init__(self, obj):
        self.obj = obj

    def __enter__(self):
        return self.obj

    def __exit__(self, *exc):
        return False


def _output(path):
    return _nullctx(sys.stdout) if path in (None, "-") else open(path, "w", newline="", encoding="utf-8")


def _cmd_featurize(args) -> None:
    series = parse_csv(args.input, args.sample_rate)
    data = featurize(series, args.filter_width, args.stride)
    log.info("extracted %d windows", len(data))
    with _output(args.output) as fh:
        write_dataset(data, fh)


def _cmd_rank(args) -> None:
    ranking = rank_features_info_gain(read_dataset(args.data))
    entries = ranking.entries[: args.top] if args.top else ranking.entries
    with _output(args.output) as fh:
        fh.write(f"# label entropy {ranking.label_entropy:.6f} bits\n")
        for i, (name, gain) in enumerate(entries, 1):
            fh.write(f"{i:2d}  {name:24s} {gain:.6f}\n")


def _load_training(args):
    data = read_dataset(args.data)
    if args.features is not None:
        data = select_features(data, args.features)
    return data


def _cmd_train(args) -> None:
    hp = _hyperparams(args)
    data = _load_training(args)
    model = train(args.kind, data, **hp)
    save_model(model, args.output)
    log.info("trained %s on %d rows in %.4fs", args.kind, len(data), model.build_time_s)


def _cmd_eval(args) -> None:
    if args.model:
        model = load_model(args.model)
        data = read_dataset(args.data)
        report = evaluate(model, data, seed=None, label=args.model)
    else:
        hp = _hyperparams(args)
        data = _load_training(args)
        train_set, test_set = shuffle_split(data, args.train_fraction, args.seed)
        model = train(args.kind, train_set, **hp)
        report = evaluate(model, test_set, len(train_set), args.seed, args.kind)
    print(render_table([report]))
    print("confusion (rows = true, cols = predicted):")
    for code, row in enumerate(report.confusion):
        print(f"  {Activity(code).label:14s} " + " ".join(f"{c:5d}" for c in row))
    if args.records:
        write_records([report], args.records)


def _cmd_bench(args) -> None:
    if not args.preset and not args.row:
        raise UsageError("give --preset table3 and/or at least one --row")
    plan = table3_plan(args.seed) if args.preset else []
    try:
        plan += [parse_plan_row(r, args.seed) for r in args.row]
    except (KeyError, ValueError) as err:
        raise UsageError(f"bad --row: {err}") from None
    data = read_dataset(args.data)
    reports = run_benchmark(plan, data, args.seed, args.train_fraction, args.fresh_split)
    if args.format in ("table", "both"):
        print(render_table(reports))
    if args.format in ("records", "both"):
        for rep in reports:
            print(json.dumps(rep.to_record()))
    if args.records:
        write_records(reports, args.records)
    if not any(r.ok for r in reports):
        raise RuntimeError("every benchmark row failed")


def _cmd_stream(args) -> None:
    cfg = StreamConfig(weight_kg=args.weight, votes_per_decision=args.votes, filter_width=args.filter_width,
                       sample_rate_hz=args.sample_rate, rate_multiplier=args.rate, wall_clock=args.wall_clock)
    model = load_model(args.model)
    source = threaded(replay(args.input, args.rate, args.sample_rate))
    with _output(args.output) as fh:
        events = write_events(run_stream(source, model, cfg), fh)
    log.info("%d decisions, %.4f kcal", len(events), events[-1].kcal_total if events else 0.0)


COMMANDS = {
    "synth": _cmd_synth,
    "featurize": _cmd_featurize,
    "rank": _cmd_rank,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "stream": _cmd_stream,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"phonehar {args.command}: error: {err}", file=sys.stderr)
        return 2
    except (ParseError, ModelFormatError, ValueError, KeyError, OSError, RuntimeError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"phonehar {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
