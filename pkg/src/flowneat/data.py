"""Iris and Wisconsin breast-cancer loaders, normalization and splits."""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np


class ParseError(ValueError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


class WrongArity(ParseError):
    pass


class DegenerateSplit(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray  # (samples, features), float64
    labels: np.ndarray  # (samples,), int64 class indices
    n_classes: int
    feature_ranges: tuple = ()  # ((lo, hi), ...) of the raw columns
    class_names: tuple = ()

    def __post_init__(self):
        if len(self.features) != len(self.labels):
            raise ValueError("features and labels disagree on sample count")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= self.n_classes):
            raise ValueError("label out of range")

    def __len__(self):
        return len(self.labels)

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.n_classes).tolist()

    def subset(self, rows) -> Dataset:
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.features[rows], self.labels[rows], self.n_classes, self.feature_ranges, self.class_names)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.75
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package (``iris`` or ``wdbc``)."""
    fname = {"iris": "iris.data", "wdbc": "breast-cancer-wisconsin.data"}[name]
    return Path(str(resources.files("flowneat") / "data" / fname))


def _decoded_lines(path):
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            try:
                yield raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(f"not valid UTF-8 ({exc.reason})", lineno) from None


def _rows(path):
    reader = csv.reader(_decoded_lines(path))
    while True:
        lineno = reader.line_num + 1  # first physical line of the record
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            raise ParseError(str(exc), lineno) from None
        if not row or all(not f.strip() for f in row):
            continue
        yield lineno, [f.strip() for f in row]


def minmax_normalize(x: np.ndarray) -> tuple[np.ndarray, tuple]:
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return (x - lo) / span, tuple(zip(lo.tolist(), hi.tolist()))


def load_iris(path) -> Dataset:
    """UCI ``iris.data``: four measurements and a class name per row.

    Class indices follow first appearance; columns are min-max scaled.
    """
    feats, labels, names = [], [], {}
    for lineno, row in _rows(path):
        if len(row) != 5:
            raise WrongArity(f"expected 5 fields, got {len(row)}", lineno)
        try:
            feats.append([float(v) for v in row[:4]])
        except ValueError:
            raise ParseError(f"non-numeric feature in {row[:4]}", lineno) from None
        labels.append(names.setdefault(row[4], len(names)))
    if not feats:
        raise ParseError("no data rows")
    x, ranges = minmax_normalize(np.array(feats, dtype=np.float64))
    return Dataset(x, np.array(labels, dtype=np.int64), len(names), ranges, tuple(names))


def load_wdbc(path) -> Dataset:
    """UCI ``breast-cancer-wisconsin.data`` (original, 699 rows).

    Layout: id, nine attributes in 1..10, class 2 (benign) or 4 (malignant);
    ``?`` marks a missing value. Incomplete rows are dropped and attributes
    are scaled by ``(v - 1) / 9``.
    """
    feats, labels = [], []
    seen = 0
    for lineno, row in _rows(path):
        seen += 1
        if len(row) != 11:
            raise WrongArity(f"expected 11 fields, got {len(row)}", lineno)
        if "?" in row[1:10]:
            continue
        try:
            vals = [int(v) for v in row[1:10]]
            cls = int(row[10])
        except ValueError:
            raise ParseError(f"non-integer field in {row}", lineno) from None
        if cls not in (2, 4):
            raise ParseError(f"class must be 2 or 4, got {cls}", lineno)
        if any(not 1 <= v <= 10 for v in vals):
            raise ParseError(f"attribute outside 1..10 in {vals}", lineno)
        feats.append([(v - 1) / 9.0 for v in vals])
        labels.append(0 if cls == 2 else 1)
    if not seen:
        raise ParseError("no data rows")
    x = np.array(feats, dtype=np.float64).reshape(-1, 9)
    return Dataset(x, np.array(labels, dtype=np.int64), 2, ((1.0, 10.0),) * 9, ("benign", "malignant"))


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def split(d: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Seeded (optionally stratified) train/test partition.

    Each class contributes ``round(train_fraction * class_size)`` samples to
    the training half when stratified. Both halves keep the original row
    order.
    """
    rng = random.Random(spec.seed)
    if spec.stratified:
        groups = [np.flatnonzero(d.labels == c).tolist() for c in range(d.n_classes)]
    else:
        groups = [list(range(len(d)))]
    train = []
    for members in groups:
        rng.shuffle(members)
        train.extend(members[: _round_half_up(spec.train_fraction * len(members))])
    train_set = set(train)
    for c in range(d.n_classes):
        if d.class_counts()[c] and not any(d.labels[i] == c for i in train_set):
            raise DegenerateSplit(f"class {c} has no training samples")
    train_rows = sorted(train_set)
    test_rows = [i for i in range(len(d)) if i not in train_set]
    return d.subset(train_rows), d.subset(test_rows)
