"""Metabolite intensity tables: loading, validation, merging, synthesis.

A table is a dense samples x features matrix of strictly positive
intensities with binary labels (1 = condition-positive). Features carry an
ionization mode (ESI+ / ESI-) and a known/unknown annotation; by convention
unidentified features are named with an ``unknown`` prefix.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    BadLabelError,
    DuplicateFeatureError,
    DuplicateSampleIdError,
    InvalidSpecError,
    MissingValueError,
    NonPositiveIntensityError,
    SampleMismatchError,
    SchemaError,
)

SAMPLE_ID_COLUMN = "sample_id"
LABEL_COLUMN = "label"


class IonMode(str, Enum):
    ESI_POS = "ESI+"
    ESI_NEG = "ESI-"


MODE_SUFFIX = {IonMode.ESI_POS: "_ESI+", IonMode.ESI_NEG: "_ESI-"}


def known_from_name(name: str) -> bool:
    """Default annotation rule: a feature is unknown iff its name says so."""
    return not name.startswith("unknown")


@dataclass(frozen=True)
class FeatureMeta:
    name: str
    mode: IonMode
    known: bool


@dataclass(frozen=True)
class MetaboliteTable:
    """Immutable intensity table.

    Invariants enforced at construction: row count matches sample_ids and
    labels, column count matches features, all intensities strictly positive
    and finite, sample ids and feature names pairwise distinct, labels in
    {0, 1}.
    """

    sample_ids: tuple[str, ...]
    features: tuple[FeatureMeta, ...]
    values: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "sample_ids", tuple(self.sample_ids))
        object.__setattr__(self, "features", tuple(self.features))
        values = np.array(self.values, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64)
        if values.ndim != 2:
            raise SchemaError(f"values must be 2-D, got shape {values.shape}")
        n, p = values.shape
        if n != len(self.sample_ids) or n != labels.shape[0]:
            raise SchemaError(
                f"row count mismatch: {n} rows, {len(self.sample_ids)} sample ids, "
                f"{labels.shape[0]} labels"
            )
        if p != len(self.features):
            raise SchemaError(f"column count mismatch: {p} columns, {len(self.features)} features")
        if np.isnan(values).any():
            i, j = np.argwhere(np.isnan(values))[0]
            raise MissingValueError(f"NaN intensity for sample {self.sample_ids[i]!r}, feature {self.features[j].name!r}")
        if not np.isfinite(values).all():
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise SchemaError(f"non-finite intensity for sample {self.sample_ids[i]!r}, feature {self.features[j].name!r}")
        if (values <= 0).any():
            i, j = np.argwhere(values <= 0)[0]
            raise NonPositiveIntensityError(
                f"non-positive intensity {values[i, j]!r} for sample {self.sample_ids[i]!r}, "
                f"feature {self.features[j].name!r}"
            )
        if len(set(self.sample_ids)) != n:
            raise DuplicateSampleIdError("sample ids are not pairwise distinct")
        seen: set[str] = set()
        for f in self.features:
            if f.name in seen:
                raise DuplicateFeatureError(f"duplicate feature name {f.name!r}")
            seen.add(f.name)
        bad = ~np.isin(labels, (0, 1))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise BadLabelError(f"label {labels[i]!r} for sample {self.sample_ids[i]!r} is not 0/1")
        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def class_counts(self) -> tuple[int, int]:
        ones = int(self.labels.sum())
        return self.n_samples - ones, ones


@dataclass(frozen=True)
class Issue:
    """One validation finding; row/column are 1-based file positions."""

    kind: str
    row: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at row {self.row}, column {self.column}: {self.message}"


_ISSUE_ERRORS = {
    "MissingValue": MissingValueError,
    "NonPositiveIntensity": NonPositiveIntensityError,
    "DuplicateSampleId": DuplicateSampleIdError,
    "BadLabel": BadLabelError,
    "Schema": SchemaError,
}


def _scan_csv(path: str | Path) -> tuple[list[str], list[str], np.ndarray, np.ndarray, list[Issue]]:
    """Parse and collect all issues; returns (ids, names, values, labels, issues)."""
    issues: list[Issue] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return [], [], np.empty((0, 0)), np.empty(0), [Issue("Schema", 1, 1, "empty file")]
        if len(header) < 3:
            issues.append(Issue("Schema", 1, 1, "need sample_id, at least one feature, and label columns"))
            return [], [], np.empty((0, 0)), np.empty(0), issues
        if header[0] != SAMPLE_ID_COLUMN:
            issues.append(Issue("Schema", 1, 1, f"first column must be {SAMPLE_ID_COLUMN!r}, got {header[0]!r}"))
        if header[-1] != LABEL_COLUMN:
            issues.append(Issue("Schema", 1, len(header), f"last column must be {LABEL_COLUMN!r}, got {header[-1]!r}"))
        names = header[1:-1]
        p = len(names)
        ids: list[str] = []
        rows: list[list[float]] = []
        labels: list[int] = []
        seen_ids: set[str] = set()
        for rownum, rec in enumerate(reader, start=2):
            if len(rec) != len(header):
                issues.append(Issue("Schema", rownum, 1, f"expected {len(header)} cells, got {len(rec)}"))
                continue
            sid = rec[0]
            if sid in seen_ids:
                issues.append(Issue("DuplicateSampleId", rownum, 1, f"sample id {sid!r} repeated"))
            seen_ids.add(sid)
            row = [math.nan] * p
            for j, cell in enumerate(rec[1:-1], start=0):
                col = j + 2
                if cell.strip() == "":
                    issues.append(Issue("MissingValue", rownum, col, "empty cell"))
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    issues.append(Issue("Schema", rownum, col, f"unparseable number {cell!r}"))
                    continue
                if math.isnan(v):
                    issues.append(Issue("MissingValue", rownum, col, "NaN cell"))
                elif math.isinf(v):
                    issues.append(Issue("Schema", rownum, col, "infinite value"))
                elif v <= 0:
                    issues.append(Issue("NonPositiveIntensity", rownum, col, f"intensity {cell} is not > 0"))
                else:
                    row[j] = v
            label_cell = rec[-1].strip()
            label = -1
            if label_cell not in ("0", "1"):
                issues.append(Issue("BadLabel", rownum, len(header), f"label {rec[-1]!r} is not 0 or 1"))
            else:
                label = int(label_cell)
            ids.append(sid)
            rows.append(row)
            labels.append(label)
    values = np.array(rows, dtype=np.float64) if rows else np.empty((0, p))
    # duplicate feature names are a schema problem too
    seen_names: set[str] = set()
    for j, nm in enumerate(names):
        if nm in seen_names:
            issues.append(Issue("Schema", 1, j + 2, f"duplicate feature name {nm!r}"))
        seen_names.add(nm)
    return ids, names, values, np.array(labels, dtype=np.int64), issues


def validate_csv(path: str | Path) -> list[Issue]:
    """Scan a CSV and return every schema/value problem found (empty = clean)."""
    return _scan_csv(path)[4]


def load_metadata(path: str | Path) -> dict[str, bool]:
    """Read a ``name,mode,known`` CSV into a name -> known override map."""
    overrides: dict[str, bool] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "name" not in reader.fieldnames or "known" not in reader.fieldnames:
            raise SchemaError("metadata CSV must have 'name' and 'known' columns")
        for rec in reader:
            token = rec["known"].strip().lower()
            if token not in ("true", "false", "0", "1"):
                raise SchemaError(f"metadata 'known' value {rec['known']!r} is not boolean")
            overrides[rec["name"]] = token in ("true", "1")
    return overrides


def load_csv(
    path: str | Path,
    mode: IonMode,
    metadata: Mapping[str, bool] | None = None,
) -> MetaboliteTable:
    """Load and validate one ionization mode's table.

    Layout: header ``sample_id,<feature names...>,label``; every interior
    cell a strictly positive finite number. The first problem found is
    raised; use :func:`validate_csv` to collect all of them.
    """
    ids, names, values, labels, issues = _scan_csv(path)
    if issues:
        first = issues[0]
        raise _ISSUE_ERRORS[first.kind](str(first))
    features = tuple(
        FeatureMeta(
            name=nm,
            mode=mode,
            known=metadata[nm] if metadata is not None and nm in metadata else known_from_name(nm),
        )
        for nm in names
    )
    return MetaboliteTable(tuple(ids), features, values, labels)


def write_csv(table: MetaboliteTable, path: str | Path) -> None:
    """Write a table; numerals are shortest decimal strings that parse back bit-exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([SAMPLE_ID_COLUMN, *table.feature_names, LABEL_COLUMN])
        for i, sid in enumerate(table.sample_ids):
            row = [sid]
            row.extend(repr(float(v)) for v in table.values[i])
            row.append(str(int(table.labels[i])))
            writer.writerow(row)


def merge_modes(pos: MetaboliteTable, neg: MetaboliteTable) -> MetaboliteTable:
    """Concatenate the two ionization modes horizontally.

    Sample ids and labels must match exactly (same order). Every feature
    name gains an ``_ESI+`` / ``_ESI-`` suffix according to its own mode,
    which keeps names disjoint across the two blocks.
    """
    if pos.sample_ids != neg.sample_ids:
        raise SampleMismatchError("sample ids differ between ionization modes")
    if not np.array_equal(pos.labels, neg.labels):
        raise SampleMismatchError("labels differ between ionization modes")
    features = tuple(
        replace(f, name=f.name + MODE_SUFFIX[f.mode]) for f in (*pos.features, *neg.features)
    )
    values = np.hstack([pos.values, neg.values])
    return MetaboliteTable(pos.sample_ids, features, values, pos.labels)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for the synthetic table generator.

    Log2 intensities are gaussian per feature; ``n_informative`` randomly
    chosen features get a ``+effect_size`` mean shift (log2 scale) in
    class-1 samples. Equal seeds give bit-identical tables.
    """

    n_samples: int = 81
    n_features_pos: int = 1922
    n_features_neg: int = 939
    n_class0: int = 27
    n_class1: int = 54
    n_informative: int = 40
    effect_size: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_class0 + self.n_class1 != self.n_samples:
            raise InvalidSpecError(
                f"n_class0 + n_class1 = {self.n_class0 + self.n_class1} != n_samples = {self.n_samples}"
            )
        if self.n_samples < 1:
            raise InvalidSpecError("n_samples must be >= 1")
        if min(self.n_class0, self.n_class1) < 0:
            raise InvalidSpecError("class counts must be >= 0")
        if min(self.n_features_pos, self.n_features_neg) < 1:
            raise InvalidSpecError("each ionization mode needs >= 1 feature")
        total = self.n_features_pos + self.n_features_neg
        if not 0 <= self.n_informative <= total:
            raise InvalidSpecError(f"n_informative must be in [0, {total}]")
        if not self.effect_size >= 0:
            raise InvalidSpecError("effect_size must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpecError("seed must be a 64-bit unsigned integer")


# log2-scale ranges for the per-feature gaussians; intensities land in
# roughly instrument-plausible magnitudes (2^10 .. 2^20)
_LOG2_MEAN_RANGE = (10.0, 20.0)
_LOG2_SD_RANGE = (0.8, 1.2)


def _feature_name(i: int) -> str:
    # every third feature gets an identified-compound style name, the rest
    # follow the unknownNNN convention
    return f"cmpd{i:04d}" if i % 3 == 0 else f"unknown{i}"


def synthesize_with_truth(spec: SynthSpec) -> tuple[MetaboliteTable, MetaboliteTable, tuple[str, ...]]:
    """Generate the ESI+/ESI- pair plus the planted features' merged names."""
    rng = np.random.default_rng(spec.seed)
    p = spec.n_features_pos + spec.n_features_neg
    n = spec.n_samples
    mu = rng.uniform(*_LOG2_MEAN_RANGE, size=p)
    sd = rng.uniform(*_LOG2_SD_RANGE, size=p)
    informative = rng.choice(p, size=spec.n_informative, replace=False)
    log2_values = mu + sd * rng.standard_normal((n, p))
    labels = np.array([0] * spec.n_class0 + [1] * spec.n_class1, dtype=np.int64)
    class1_rows = np.flatnonzero(labels == 1)
    if class1_rows.size and informative.size:
        log2_values[np.ix_(class1_rows, informative)] += spec.effect_size
    values = np.exp2(log2_values)
    sample_ids = tuple(f"S{i:04d}" for i in range(n))

    def make_table(cols: slice, mode: IonMode) -> MetaboliteTable:
        block = values[:, cols]
        features = tuple(
            FeatureMeta(_feature_name(j), mode, known_from_name(_feature_name(j)))
            for j in range(block.shape[1])
        )
        return MetaboliteTable(sample_ids, features, block, labels)

    pos = make_table(slice(0, spec.n_features_pos), IonMode.ESI_POS)
    neg = make_table(slice(spec.n_features_pos, p), IonMode.ESI_NEG)
    truth = []
    for idx in sorted(int(i) for i in informative):
        if idx < spec.n_features_pos:
            truth.append(_feature_name(idx) + MODE_SUFFIX[IonMode.ESI_POS])
        else:
            truth.append(_feature_name(idx - spec.n_features_pos) + MODE_SUFFIX[IonMode.ESI_NEG])
    return pos, neg, tuple(truth)


def synthesize(spec: SynthSpec) -> tuple[MetaboliteTable, MetaboliteTable]:
    """Generate a reproducible ESI+/ESI- table pair from the spec."""
    pos, neg, _ = synthesize_with_truth(spec)
    return pos, neg
