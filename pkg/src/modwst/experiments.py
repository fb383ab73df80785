"""Experiment harness: dataset -> representation -> split -> train -> report.

Used by the command line front end and the scripts; everything here is a
pure function of its configuration and seed, so artifacts written twice
with the same inputs are byte-identical (reports carry no timestamps).
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import __version__
from .classify import (
    FeatureMatrix,
    apply_preprocessor,
    evaluate,
    fit_preprocessor,
    model_to_dict,
    render_report_table,
    stratified_split,
    train_centroid,
    train_gnb,
    train_lda,
    train_linear_svm,
)
from .dataio import file_sha256, ingest_ecg, read_series_csv, write_manifest
from .errors import InvalidInputError
from .filters import builtin_filter
from .scattering import (
    ScatteringConfig,
    config_from_json,
    flatten,
    flatten_labels,
    modwst,
    uniform_averaging_filter,
)
from .simulate import LabeledDataset, benchmark_suite
from .transforms import dwt, modwt


# ---------------------------------------------------------------------------
# Feature extraction per representation
# ---------------------------------------------------------------------------


def _dwt_row(x, f, J):
    c = dwt(x, f, J)
    return np.concatenate(c.detail + [c.smooth])


def _modwt_row(x, f, J):
    c = modwt(x, f, J)
    return np.concatenate(c.detail + [c.smooth])


def _modwst_row(x, cfg):
    return flatten(modwst(x, cfg))


def _map_rows(fn, series, threads: int) -> list[np.ndarray]:
    if threads <= 1:
        return [fn(x) for x in series]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, len(series) // (4 * threads))
        return list(pool.map(fn, series, chunksize=chunk))


def extract_features(
    ds: LabeledDataset,
    kind: str,
    wavelet: str = "haar",
    level: int | None = None,
    scattering: ScatteringConfig | None = None,
    threads: int = 1,
) -> FeatureMatrix:
    """Turn every series into one feature row.

    Kinds: ``original`` (raw values), ``dwt`` (all T coefficients), ``modwt``
    ((J+1)*T coefficients), ``modwst`` (flattened scattering coefficients,
    honoring the config's drop list).
    """
    T = ds.T
    if kind == "original":
        return FeatureMatrix(ds.series.copy(), list(ds.labels), [f"x{i}" for i in range(T)])
    if kind == "dwt":
        f = builtin_filter(wavelet)
        J = int(math.log2(T)) if level is None else level
        rows = _map_rows(partial(_dwt_row, f=f, J=J), ds.series, threads)
        names = [f"W{j}:{i}" for j in range(1, J + 1) for i in range(T >> j)]
        names += [f"V{J}:{i}" for i in range(T >> J)]
        return FeatureMatrix(np.vstack(rows), list(ds.labels), names)
    if kind == "modwt":
        f = builtin_filter(wavelet)
        J = int(math.log2(T)) if level is None else level
        rows = _map_rows(partial(_modwt_row, f=f, J=J), ds.series, threads)
        names = [f"Wt{j}:{i}" for j in range(1, J + 1) for i in range(T)]
        names += [f"Vt{J}:{i}" for i in range(T)]
        return FeatureMatrix(np.vstack(rows), list(ds.labels), names)
    if kind == "modwst":
        if scattering is None:
            raise InvalidInputError("modwst representation needs a scattering config")
        rows = _map_rows(partial(_modwst_row, cfg=scattering), ds.series, threads)
        probe = modwst(ds.series[0], scattering)
        return FeatureMatrix(np.vstack(rows), list(ds.labels), flatten_labels(probe))
    raise InvalidInputError(f"unknown representation {kind!r}")


# ---------------------------------------------------------------------------
# Experiment configuration and run
# ---------------------------------------------------------------------------

_DEFAULT_PREPROCESS = {"kind": "zscore", "drop_zero_variance": True}


@dataclass
class ExperimentConfig:
    """Fully resolved experiment description.  The seed is mandatory and
    drives simulation, the split, and any classifier-internal shuffling."""

    seed: int
    dataset: dict
    representation: dict
    classifier: dict
    split_fraction: float = 0.8
    preprocess: dict = field(default_factory=lambda: dict(_DEFAULT_PREPROCESS))
    threads: int = 1

    def __post_init__(self):
        if self.seed is None:
            raise InvalidInputError("an explicit seed is required")
        if not 0.0 < self.split_fraction < 1.0:
            raise InvalidInputError(f"split fraction must be in (0, 1), got {self.split_fraction}")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "dataset": self.dataset,
            "representation": self.representation,
            "classifier": self.classifier,
            "split_fraction": self.split_fraction,
            "preprocess": self.preprocess,
            "threads": self.threads,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise InvalidInputError(f"unknown experiment config keys: {sorted(unknown)}")
        missing = {"seed", "dataset", "representation", "classifier"} - set(doc)
        if missing:
            raise InvalidInputError(f"experiment config missing keys: {sorted(missing)}")
        return cls(**doc)


def _load_dataset(cfg: ExperimentConfig):
    ds_cfg = dict(cfg.dataset)
    source = ds_cfg.get("source")
    hashes = {}
    if source == "simulate":
        ds = benchmark_suite(
            n_per_class=int(ds_cfg.get("n_per_class", 200)),
            T=int(ds_cfg.get("length", 1024)),
            seed=int(ds_cfg.get("seed", cfg.seed)),
        )
    elif source == "csv":
        path = ds_cfg["path"]
        ds = read_series_csv(path, has_header=bool(ds_cfg.get("has_header", False)))
        hashes[str(path)] = file_sha256(path)
    elif source == "ecg":
        path = ds_cfg["path"]
        ds = ingest_ecg(
            path,
            target_length=int(ds_cfg.get("target_length", 187)),
            pad_side=ds_cfg.get("pad_side", "right"),
        )
        hashes[str(path)] = file_sha256(path)
    else:
        raise InvalidInputError(f"unknown dataset source {source!r}")
    return ds, hashes


def _scattering_from_dict(doc: dict) -> ScatteringConfig:
    return config_from_json(json.dumps(doc))


_TRAINERS = {
    "svm_linear": (
        train_linear_svm,
        {"C": 1.0, "tol": 1e-4, "max_iter": 10000, "seed": 0},
    ),
    "lda": (train_lda, {"ridge_scale": 1e-6}),
    "gnb": (train_gnb, {"var_floor": 1e-9}),
    "centroid": (train_centroid, {}),
}


def _train(classifier: dict, X: np.ndarray, y):
    kind = classifier.get("kind")
    if kind not in _TRAINERS:
        raise InvalidInputError(f"unknown classifier {kind!r}")
    trainer, defaults = _TRAINERS[kind]
    kwargs = dict(defaults)
    for key, value in classifier.items():
        if key == "kind":
            continue
        if key not in defaults:
            raise InvalidInputError(f"unknown {kind} hyperparameter {key!r}")
        kwargs[key] = type(defaults[key])(value)
    return trainer(X, y, **kwargs), kwargs


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> dict:
    """Execute the full pipeline; optionally write the report artifacts.

    Writes ``report.json``, ``report.txt`` and ``confusion.csv`` into
    ``out_dir`` when given.  The JSON embeds the resolved configuration,
    package version and input hashes, so reruns are verifiable.
    """
    ds, hashes = _load_dataset(cfg)
    rep = dict(cfg.representation)
    kind = rep.get("kind")
    scattering = None
    if kind == "modwst":
        scattering = _scattering_from_dict(rep.get("scattering", {}))
    features = extract_features(
        ds,
        kind,
        wavelet=rep.get("wavelet", "haar"),
        level=rep.get("level"),
        scattering=scattering,
        threads=cfg.threads,
    )
    train_fm, test_fm = stratified_split(features, cfg.split_fraction, cfg.seed)
    pre = fit_preprocessor(
        train_fm,
        kind=cfg.preprocess.get("kind", "zscore"),
        drop_zero_variance=bool(cfg.preprocess.get("drop_zero_variance", True)),
    )
    train_p = apply_preprocessor(pre, train_fm)
    test_p = apply_preprocessor(pre, test_fm)
    model, resolved_hp = _train(cfg.classifier, train_p.rows, train_p.labels)
    report = evaluate(test_fm.labels, model.predict(test_p.rows))

    doc = {
        "config": cfg.to_dict(),
        "version": __version__,
        "input_hashes": hashes,
        "classifier": {"kind": cfg.classifier.get("kind"), "hyperparams": resolved_hp},
        "n_train": train_fm.n,
        "n_test": test_fm.n,
        "n_features_extracted": features.d,
        "n_features_used": train_p.d,
        "metrics": report.to_dict(),
        "classifier_meta": getattr(model, "meta", []),
    }
    if out_dir is not None:
        import os

        os.makedirs(out_dir, exist_ok=True)
        write_manifest(os.path.join(out_dir, "report.json"), doc)
        name = f"{rep.get('kind')}/{cfg.classifier.get('kind')}"
        text = render_report_table([(name, report)])
        text += "\n\nConfusion (rows = predicted, columns = reference):\n"
        text += _confusion_text(report.confusion)
        with open(os.path.join(out_dir, "report.txt"), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _write_confusion_csv(report.confusion, os.path.join(out_dir, "confusion.csv"))
    return doc


def _confusion_text(cm) -> str:
    width = max(6, max(len(l) for l in cm.labels) + 1)
    lines = [" " * width + "".join(f"{l:>{width}}" for l in cm.labels)]
    for i, l in enumerate(cm.labels):
        lines.append(f"{l:>{width}}" + "".join(f"{v:>{width}}" for v in cm.counts[i]))
    return "\n".join(lines)


def _write_confusion_csv(cm, path) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["predicted"] + list(cm.labels))
        for label, row in zip(cm.labels, cm.counts):
            writer.writerow([label] + [int(v) for v in row])


# ---------------------------------------------------------------------------
# Timing
# ---------------------------------------------------------------------------


def bench_scattering(
    lengths=(256, 512, 1024, 2048, 4096, 8192, 16384),
    depths=(1, 2),
    wavelet: str = "haar",
    M: int = 32,
    stride: int = 16,
    repeats: int = 3,
    seed: int = 0,
) -> dict:
    """Time the cascade across lengths and depths; fit scaling exponents.

    The reported exponent per depth is the log-log slope of best-of-repeats
    runtime against T (expected slightly above 1 from the T log T stages).
    """
    f = builtin_filter(wavelet)
    avg = uniform_averaging_filter(M)
    rng = np.random.default_rng(seed)
    entries = []
    for m in depths:
        for T in lengths:
            cfg = ScatteringConfig(wavelet=f, avg=avg, stride=stride, max_depth=m)
            x = rng.standard_normal(T)
            best = min(
                _timed(lambda: modwst(x, cfg)) for _ in range(repeats)
            )
            entries.append({"T": T, "depth": m, "seconds": best})
    exponents = {}
    for m in depths:
        pts = [(e["T"], e["seconds"]) for e in entries if e["depth"] == m]
        logs = np.log([p[0] for p in pts]), np.log([p[1] for p in pts])
        exponents[str(m)] = float(np.polyfit(logs[0], logs[1], 1)[0])
    return {"entries": entries, "exponents": exponents, "wavelet": wavelet, "M": M, "stride": stride}


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start
