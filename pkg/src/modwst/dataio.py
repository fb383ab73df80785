"""CSV and JSON file formats.

Series tables are label-first CSV rows; feature matrices add a header that
names every column.  Values are written with 17 significant digits so a
write/read round trip is exact for doubles, always with '.' as the decimal
point.  Readers reject anything non-finite and point at the offending cell.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math

import numpy as np

from .classify import FeatureMatrix
from .errors import FormatError, ParseError
from .simulate import LabeledDataset


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _parse_cell(cell: str, path, row: int, col: int) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(f"{path}: row {row}, column {col}: cannot parse {cell!r}") from None
    if not math.isfinite(v):
        raise ParseError(f"{path}: row {row}, column {col}: non-finite value {cell!r}")
    return v


def _read_rows(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            # tolerate a trailing separator
            if row and row[-1] == "":
                row = row[:-1]
            if row:
                yield row


def read_series_csv(
    path, has_header: bool = False, label_column: int = 0, pad_to: int | None = None
) -> LabeledDataset:
    """Read labeled series rows; every non-label column is a sample value.

    Rows must agree in length unless ``pad_to`` is given, in which case
    shorter rows are right-padded with zeros up to that length.
    """
    series: list[list[float]] = []
    labels: list[str] = []
    width = None
    for r, row in enumerate(_read_rows(path)):
        if has_header and r == 0:
            continue
        if label_column >= len(row):
            raise FormatError(f"{path}: row {r} has no column {label_column}")
        labels.append(row[label_column])
        values = [
            _parse_cell(cell, path, r, c)
            for c, cell in enumerate(row)
            if c != label_column
        ]
        if pad_to is not None:
            if len(values) > pad_to:
                raise FormatError(f"{path}: row {r} has {len(values)} values, limit {pad_to}")
            values = values + [0.0] * (pad_to - len(values))
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise FormatError(
                f"{path}: row {r} has {len(values)} values, expected {width} (no pad option)"
            )
        series.append(values)
    if not series:
        raise FormatError(f"{path}: no data rows")
    return LabeledDataset(series=np.asarray(series, dtype=float), labels=labels)


def write_series_csv(ds: LabeledDataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for label, row in zip(ds.labels, ds.series):
            writer.writerow([label] + [_fmt(v) for v in row])


def ingest_ecg(path, target_length: int = 187, pad_side: str = "right") -> LabeledDataset:
    """Read heartbeat rows (samples then a trailing 0/1 label column) and
    zero-pad every series to ``target_length``."""
    if pad_side not in ("right", "left"):
        raise FormatError(f"pad_side must be 'right' or 'left', got {pad_side!r}")
    series: list[list[float]] = []
    labels: list[str] = []
    for r, row in enumerate(_read_rows(path)):
        if len(row) < 2:
            raise FormatError(f"{path}: row {r} too short for samples plus a label")
        label = _parse_cell(row[-1], path, r, len(row) - 1)
        if label not in (0.0, 1.0):
            raise FormatError(f"{path}: row {r}: label must be 0 or 1, got {row[-1]!r}")
        values = [_parse_cell(cell, path, r, c) for c, cell in enumerate(row[:-1])]
        if len(values) > target_length:
            raise FormatError(
                f"{path}: row {r} has {len(values)} samples, limit {target_length}"
            )
        pad = [0.0] * (target_length - len(values))
        values = values + pad if pad_side == "right" else pad + values
        series.append(values)
        labels.append(str(int(label)))
    if not series:
        raise FormatError(f"{path}: no data rows")
    return LabeledDataset(series=np.asarray(series, dtype=float), labels=labels)


def write_feature_matrix(X: FeatureMatrix, path) -> None:
    """Label column first, then features under their column names."""
    names = X.column_meta or [f"f{i}" for i in range(X.d)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label"] + list(names))
        for label, row in zip(X.labels, X.rows):
            writer.writerow([label] + [_fmt(v) for v in row])


def read_feature_matrix(path) -> FeatureMatrix:
    rows_iter = _read_rows(path)
    try:
        header = next(rows_iter)
    except StopIteration:
        raise FormatError(f"{path}: empty file") from None
    if not header or header[0] != "label":
        raise FormatError(f"{path}: expected a header starting with 'label'")
    names = header[1:]
    rows: list[list[float]] = []
    labels: list[str] = []
    for r, row in enumerate(rows_iter, start=1):
        if len(row) != len(header):
            raise FormatError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
        labels.append(row[0])
        rows.append([_parse_cell(cell, path, r, c) for c, cell in enumerate(row[1:], start=1)])
    matrix = np.asarray(rows, dtype=float) if rows else np.empty((0, len(names)))
    return FeatureMatrix(rows=matrix, labels=labels, column_meta=list(names))


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
