"""Command line front end.

Subcommands: simulate, transform, scatter, experiment, bench.  Progress goes
to stderr, data only to files.  Exit codes: 0 success, 2 usage, 3 data
error, 4 numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .dataio import (
    file_sha256,
    read_series_csv,
    write_feature_matrix,
    write_manifest,
    write_series_csv,
)
from .errors import ModwstError, NumericalError
from .experiments import (
    ExperimentConfig,
    bench_scattering,
    extract_features,
    run_experiment,
)
from .scattering import config_from_json
from .simulate import CLASS_IDS, benchmark_suite


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_simulate(args) -> int:
    ds = benchmark_suite(n_per_class=args.n, T=args.len, seed=args.seed)
    write_series_csv(ds, args.out)
    write_manifest(
        str(args.out) + ".manifest.json",
        {
            "command": "simulate",
            "version": __version__,
            "seed": args.seed,
            "n_per_class": args.n,
            "length": args.len,
            "classes": list(CLASS_IDS),
            "rows": ds.n,
            "sha256": file_sha256(args.out),
        },
    )
    _progress(f"wrote {ds.n} series to {args.out}")
    return 0


def cmd_transform(args) -> int:
    ds = read_series_csv(args.input, has_header=args.has_header)
    fm = extract_features(
        ds, args.kind, wavelet=args.wavelet, level=args.level, threads=args.threads
    )
    write_feature_matrix(fm, args.out)
    _progress(f"wrote {fm.n} x {fm.d} feature matrix to {args.out}")
    return 0


def cmd_scatter(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = config_from_json(fh.read())
    ds = read_series_csv(args.input, has_header=args.has_header)
    fm = extract_features(ds, "modwst", scattering=cfg, threads=args.threads)
    write_feature_matrix(fm, args.out)
    _progress(f"wrote {fm.n} x {fm.d} feature matrix to {args.out}")
    return 0


def cmd_experiment(args) -> int:
    doc: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    # flags override the config file
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.split is not None:
        doc["split_fraction"] = args.split
    if args.threads is not None:
        doc["threads"] = args.threads
    if args.simulate_n is not None:
        doc["dataset"] = {
            "source": "simulate",
            "n_per_class": args.simulate_n,
            "length": args.simulate_len,
        }
    if args.csv is not None:
        doc["dataset"] = {"source": "csv", "path": args.csv, "has_header": args.has_header}
    if args.ecg is not None:
        doc["dataset"] = {"source": "ecg", "path": args.ecg}
    if args.representation is not None:
        rep: dict = {"kind": args.representation}
        if args.representation == "modwst":
            if args.scattering_config:
                with open(args.scattering_config, "r", encoding="utf-8") as fh:
                    rep["scattering"] = json.load(fh)
            else:
                rep["scattering"] = {}
        else:
            rep["wavelet"] = args.wavelet
            if args.level is not None:
                rep["level"] = args.level
        doc["representation"] = rep
    if args.classifier is not None:
        doc["classifier"] = {"kind": args.classifier}
    cfg = ExperimentConfig.from_dict(doc)
    report = run_experiment(cfg, out_dir=args.out_dir)
    acc = report["metrics"]["accuracy"]
    _progress(f"accuracy {100 * acc:.1f}% ({report['n_test']} test rows); reports in {args.out_dir}")
    return 0


def cmd_bench(args) -> int:
    report = bench_scattering(
        lengths=tuple(args.lengths),
        depths=tuple(args.depths),
        wavelet=args.wavelet,
        repeats=args.repeats,
        seed=args.seed,
    )
    write_manifest(args.out, report)
    _progress(
        "fitted runtime exponents: "
        + ", ".join(f"depth {m}: {e:.2f}" for m, e in report["exponents"].items())
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modwst",
        description="Wavelet scattering feature extraction and classification experiments",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "simulate",
        help="generate the benchmark stationary-process dataset",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--n", type=int, default=200, help="series per class")
    p.add_argument("--len", type=int, default=1024, help="series length")
    p.add_argument("--seed", type=int, required=True, help="RNG seed")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser(
        "transform",
        help="decompose a series CSV into wavelet coefficients",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--input", required=True, help="series CSV (label column first)")
    p.add_argument("--kind", choices=("dwt", "modwt"), required=True)
    p.add_argument("--wavelet", default="haar", help="built-in filter name")
    p.add_argument("--level", type=int, default=None, help="levels (default: log2 T)")
    p.add_argument("--has-header", action="store_true", help="skip the first row")
    p.add_argument("--threads", type=int, default=1, help="parallel workers")
    p.add_argument("--out", required=True, help="output feature CSV")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser(
        "scatter",
        help="extract scattering features from a series CSV",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--input", required=True, help="series CSV (label column first)")
    p.add_argument("--config", required=True, help="scattering config JSON")
    p.add_argument("--has-header", action="store_true", help="skip the first row")
    p.add_argument("--threads", type=int, default=1, help="parallel workers")
    p.add_argument("--out", required=True, help="output feature CSV")
    p.set_defaults(fn=cmd_scatter)

    p = sub.add_parser(
        "experiment",
        help="run a full classification experiment and write reports",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--config", default=None, help="experiment config JSON (flags override)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (mandatory here or in config)")
    p.add_argument("--split", type=float, default=None, help="training fraction")
    p.add_argument("--threads", type=int, default=None, help="parallel workers")
    p.add_argument("--simulate-n", type=int, default=None, help="simulate: series per class")
    p.add_argument("--simulate-len", type=int, default=1024, help="simulate: series length")
    p.add_argument("--csv", default=None, help="dataset from a series CSV")
    p.add_argument("--ecg", default=None, help="dataset from a heartbeat CSV (zero-padded)")
    p.add_argument("--has-header", action="store_true", help="series CSV has a header row")
    p.add_argument(
        "--representation",
        choices=("original", "dwt", "modwt", "modwst"),
        default=None,
    )
    p.add_argument("--scattering-config", default=None, help="scattering config JSON path")
    p.add_argument("--wavelet", default="haar", help="built-in filter name")
    p.add_argument("--level", type=int, default=None, help="transform levels")
    p.add_argument(
        "--classifier", choices=("svm_linear", "lda", "gnb", "centroid"), default=None
    )
    p.add_argument("--out-dir", required=True, help="directory for report artifacts")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser(
        "bench",
        help="time the scattering cascade and fit scaling exponents",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument(
        "--lengths",
        type=int,
        nargs="+",
        default=[256, 512, 1024, 2048, 4096, 8192, 16384],
    )
    p.add_argument("--depths", type=int, nargs="+", default=[1, 2])
    p.add_argument("--wavelet", default="haar")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="timing report JSON path")
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ModwstError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
