"""The ``ids`` command line: rank, train, evaluate, benchmark, fixtures, dataset-info.

Every command is deterministic given its flags and --seed (timing columns
excluded). Exit codes: 0 success, 1 usage error, 2 data error, 3 model
error. Relative data paths resolve against $IDS_DATA_DIR when set.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from .dataset import (ClassMapping, Dataset, LOADERS, SampleSpec, align_to_schema,
                      apply_class_mapping, dataset_info_tsv, sample_subset)
from .ensemble import StackingConfig  # noqa: F401  (re-exported for scripts)
from .errors import IdsError, UsageError
from .featsel import SelectionConfig, filter_by_threshold, rank_attributes
from .fixtures import synthetic_dataset, write_fixa_csv
from .metrics import ConfusionMatrix, render_report, weighted_metrics
from .persist import load_model, save_model
from .registry import ALGO_ORDER, train_any


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _resolve_data(path: str) -> Path:
    p = Path(path)
    base = os.environ.get("IDS_DATA_DIR")
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _load(path: str, fmt: str) -> Dataset:
    return LOADERS[fmt](_resolve_data(path))


def _mapped(d: Dataset, classes_mode: str) -> Dataset:
    return apply_class_mapping(d, ClassMapping(mode=classes_mode))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_data_flags(p, with_threshold=True):
    p.add_argument("--data", required=True, help="input CSV (or directory for cicids)")
    p.add_argument("--format", required=True, choices=sorted(LOADERS),
                   help="input data format")
    p.add_argument("--classes", choices=("binary", "multiclass"), default="binary",
                   help="class mapping applied after loading (default binary)")
    if with_threshold:
        p.add_argument("--threshold", type=float, default=0.4,
                       help="information-gain selection threshold (default 0.4)")
        p.add_argument("--bins", type=int, default=10,
                       help="equal-frequency bins for numeric gains (default 10)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--out", default=None, help="write output here instead of stdout")


def _add_hyper_flags(p):
    p.add_argument("--k", type=int, default=1, help="k for k-NN (default 1)")
    p.add_argument("--trees", type=int, default=100,
                   help="random forest size (default 100)")
    p.add_argument("--folds", type=int, default=5,
                   help="stacking meta-feature folds (default 5)")


def build_parser() -> _Parser:
    parser = _Parser(prog="ids",
                     description="Anomaly-based intrusion detection benchmark toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank attributes by information gain")
    _add_data_flags(p)

    p = sub.add_parser("train", help="train one algorithm and save the model")
    _add_data_flags(p)
    _add_hyper_flags(p)
    p.add_argument("--algo", required=True, help=f"one of {', '.join(ALGO_ORDER)}")
    p.add_argument("--model", required=True, help="output model file (JSON)")

    p = sub.add_parser("evaluate", help="evaluate a saved model on test data")
    _add_data_flags(p, with_threshold=False)
    p.add_argument("--model", required=True, help="model file from `ids train`")
    p.add_argument("--markdown", action="store_true", help="render markdown table")

    p = sub.add_parser("benchmark", help="run all algorithms and print one table")
    p.add_argument("--train", default=None, help="training CSV")
    p.add_argument("--test", default=None, help="testing CSV")
    p.add_argument("--data", default=None, help="single CSV to sample both sets from")
    p.add_argument("--train-count", type=int, default=None)
    p.add_argument("--test-count", type=int, default=None)
    p.add_argument("--stratified", action="store_true",
                   help="class-stratify the single-file sample")
    p.add_argument("--format", required=True, choices=sorted(LOADERS))
    p.add_argument("--classes", choices=("binary", "multiclass"), default="binary")
    p.add_argument("--threshold", type=float, default=0.4)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algos", default="all",
                   help="comma-separated subset of algorithms, or 'all'")
    p.add_argument("--out", default=None)
    p.add_argument("--markdown", action="store_true")
    _add_hyper_flags(p)

    p = sub.add_parser("fixtures", help="write test fixtures and synthetic data")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--rows", type=int, default=400)
    p.add_argument("--numeric", type=int, default=4)
    p.add_argument("--nominal", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("dataset-info", help="row/attribute/class summary of a file")
    p.add_argument("--data", required=True)
    p.add_argument("--format", required=True, choices=sorted(LOADERS))
    p.add_argument("--out", default=None)

    return parser


def cmd_rank(args) -> str:
    d = _mapped(_load(args.data, args.format), args.classes)
    cfg = SelectionConfig(threshold=args.threshold, bins=args.bins)
    ranking = rank_attributes(d, cfg)
    lines = ["rank\tattribute\tgain\tkept"]
    for i, r in enumerate(ranking, start=1):
        kept = "Y" if r.gain > args.threshold else "N"
        lines.append(f"{i}\t{r.name}\t{r.gain:.6f}\t{kept}")
    return "\n".join(lines) + "\n"


def _train_model(train: Dataset, args, algo: str):
    cfg = SelectionConfig(threshold=args.threshold, bins=args.bins)
    ranking = rank_attributes(train, cfg)
    filtered = filter_by_threshold(train, ranking, args.threshold)
    model = train_any(algo, filtered, args.seed, k=args.k, n_trees=args.trees,
                      folds=args.folds)
    return model, filtered


def cmd_train(args) -> str:
    if args.algo == "all":
        raise UsageError("--algo all is only valid for `ids benchmark`")
    if args.algo not in ALGO_ORDER:
        raise UsageError(f"unknown algorithm {args.algo!r}")
    train = _mapped(_load(args.data, args.format), args.classes)
    model, filtered = _train_model(train, args, args.algo)
    save_model(model, args.model, seed=args.seed)
    return (f"trained {args.algo} on {filtered.n_rows} rows x "
            f"{filtered.n_attrs} selected attributes -> {args.model}\n")


def cmd_evaluate(args) -> str:
    mf = load_model(args.model)
    test = _mapped(_load(args.data, args.format), args.classes)
    aligned = align_to_schema(test, mf.model.schema, mf.model.class_values)
    cm = ConfusionMatrix.from_model(mf.model, aligned)
    report = weighted_metrics(cm)
    fmt = "markdown" if args.markdown else "tsv"
    return render_report([(mf.algo, report)], fmt=fmt) + "\n" + cm.to_tsv()


def _benchmark_datasets(args) -> tuple[Dataset, Dataset]:
    if args.train and args.test:
        train = _mapped(_load(args.train, args.format), args.classes)
        test = _mapped(_load(args.test, args.format), args.classes)
        return train, test
    if args.data and args.train_count and args.test_count:
        full = _mapped(_load(args.data, args.format), args.classes)
        spec = SampleSpec(args.train_count, args.test_count, args.seed,
                          args.stratified)
        return sample_subset(full, spec)
    raise UsageError("benchmark needs --train/--test or --data with "
                     "--train-count/--test-count")


def cmd_benchmark(args) -> str:
    requested = (list(ALGO_ORDER) if args.algos.strip() == "all"
                 else [a.strip() for a in args.algos.split(",") if a.strip()])
    unknown = [a for a in requested if a not in ALGO_ORDER]
    if unknown:
        raise UsageError(f"unknown algorithms: {', '.join(unknown)}")
    algos = [a for a in ALGO_ORDER if a in requested]

    train, test = _benchmark_datasets(args)
    cfg = SelectionConfig(threshold=args.threshold, bins=args.bins)
    ranking = rank_attributes(train, cfg)
    filtered = filter_by_threshold(train, ranking, args.threshold)
    aligned = align_to_schema(test, filtered.schema, filtered.class_values)

    rows, times, notes = [], {}, {}
    for algo in algos:
        try:
            t0 = time.perf_counter()
            model = train_any(algo, filtered, args.seed, k=args.k,
                              n_trees=args.trees, folds=args.folds)
            t1 = time.perf_counter()
            cm = ConfusionMatrix.from_model(model, aligned)
            report = weighted_metrics(cm)
            t2 = time.perf_counter()
            rows.append((algo, report))
            times[algo] = (t1 - t0, t2 - t1)
        except IdsError as e:
            rows.append((algo, None))
            notes[algo] = f"FAILED: {e}"
    fmt = "markdown" if args.markdown else "tsv"
    return render_report(rows, fmt=fmt, times=times, notes=notes or None)


def cmd_fixtures(args) -> str:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fixa = out_dir / "fixa.csv"
    write_fixa_csv(fixa)
    synthetic = out_dir / "synthetic.csv"
    from .dataset import write_csv

    write_csv(synthetic_dataset(args.rows, args.numeric, args.nominal, args.seed),
              synthetic)
    return f"wrote {fixa}\nwrote {synthetic}\n"


def cmd_dataset_info(args) -> str:
    return dataset_info_tsv(_load(args.data, args.format))


_COMMANDS = {
    "rank": cmd_rank,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "benchmark": cmd_benchmark,
    "fixtures": cmd_fixtures,
    "dataset-info": cmd_dataset_info,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = _COMMANDS[args.command](args)
        _emit(text, getattr(args, "out", None))
        return 0
    except UsageError as e:
        print(f"ids: usage error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"ids: usage error: {e}", file=sys.stderr)
        return 1
    except IdsError as e:
        print(f"ids: error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
