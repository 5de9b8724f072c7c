"""Log2 z-score standardization followed by rank-based quantile normalization.

Standardization: each cell becomes (log2(x) - feature mean of log2) / feature
sample SD. Quantile normalization then maps every sample's standardized value
distribution onto a common reference: the vector of per-rank means across the
standardized training rows. The r-th smallest value in a row is replaced by
the r-th reference entry; tied values receive the mean of the reference
entries their ranks span.

Two usage modes: fit-and-transform the whole table before any CV split (the
default pipeline), or fit on training folds only for leakage-safe evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import MetaboliteTable
from .errors import EmptyTableError, NonPositiveIntensityError, ShapeMismatchError


@dataclass(frozen=True)
class PreprocessParams:
    """Fitted state: per-feature log2 moments and the reference quantiles."""

    log2_means: np.ndarray
    log2_sds: np.ndarray
    reference: np.ndarray
    fitted_on: int

    def __post_init__(self) -> None:
        for name in ("log2_means", "log2_sds", "reference"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.log2_means.shape != self.log2_sds.shape or self.log2_means.shape != self.reference.shape:
            raise ShapeMismatchError("means, sds and reference must have equal length")
        if (self.log2_sds < 0).any():
            raise ShapeMismatchError("standard deviations must be >= 0")
        if (np.diff(self.reference) < 0).any():
            raise ShapeMismatchError("reference quantile vector must be non-decreasing")

    @property
    def n_features(self) -> int:
        return self.log2_means.shape[0]


def _as_values(table: MetaboliteTable | np.ndarray) -> np.ndarray:
    values = table.values if isinstance(table, MetaboliteTable) else np.asarray(table, dtype=np.float64)
    if values.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-D matrix, got shape {values.shape}")
    if values.size and (~np.isfinite(values) | (values <= 0)).any():
        raise NonPositiveIntensityError("intensities must be strictly positive and finite")
    return values


def _standardize(values: np.ndarray, means: np.ndarray, sds: np.ndarray) -> np.ndarray:
    logged = np.log2(values)
    out = np.zeros_like(logged)
    nonconst = sds > 0
    out[:, nonconst] = (logged[:, nonconst] - means[nonconst]) / sds[nonconst]
    return out


def fit_preprocessor(train: MetaboliteTable | np.ndarray) -> PreprocessParams:
    """Compute per-feature log2 moments and the reference quantile vector."""
    values = _as_values(train)
    n = values.shape[0]
    if n == 0 or values.shape[1] == 0:
        raise EmptyTableError("cannot fit preprocessing on an empty table")
    logged = np.log2(values)
    means = logged.mean(axis=0)
    # sample SD (n-1 denominator); a single row or a constant feature gets 0
    sds = logged.std(axis=0, ddof=1) if n > 1 else np.zeros(values.shape[1])
    standardized = _standardize(values, means, sds)
    reference = np.sort(standardized, axis=1).mean(axis=0)
    return PreprocessParams(means, sds, reference, fitted_on=n)


def _quantile_normalize_row(row: np.ndarray, reference: np.ndarray) -> np.ndarray:
    order = np.argsort(row, kind="stable")
    ranked = row[order]
    # run boundaries of tied values; each run takes the mean of its reference slice
    starts = np.flatnonzero(np.concatenate(([True], ranked[1:] != ranked[:-1])))
    counts = np.diff(np.concatenate((starts, [row.shape[0]])))
    if starts.shape[0] == row.shape[0]:
        mapped = reference
    else:
        run_means = np.add.reduceat(reference, starts) / counts
        mapped = np.repeat(run_means, counts)
    out = np.empty_like(row)
    out[order] = mapped
    return out


def transform(params: PreprocessParams, table: MetaboliteTable | np.ndarray) -> np.ndarray:
    """Standardize with the fitted moments, then quantile-map each row by rank."""
    values = _as_values(table)
    if values.shape[1] != params.n_features:
        raise ShapeMismatchError(
            f"table has {values.shape[1]} features, preprocessor was fitted on {params.n_features}"
        )
    standardized = _standardize(values, params.log2_means, params.log2_sds)
    out = np.empty_like(standardized)
    for i in range(standardized.shape[0]):
        out[i] = _quantile_normalize_row(standardized[i], params.reference)
    return out


def preprocess_global(table: MetaboliteTable | np.ndarray) -> np.ndarray:
    """Fit on the whole table and transform it (the default pipeline order)."""
    return transform(fit_preprocessor(table), table)


def standardized_only(params: PreprocessParams, table: MetaboliteTable | np.ndarray) -> np.ndarray:
    """The intermediate z-scores before quantile normalization (for checks/inspection)."""
    values = _as_values(table)
    if values.shape[1] != params.n_features:
        raise ShapeMismatchError(
            f"table has {values.shape[1]} features, preprocessor was fitted on {params.n_features}"
        )
    return _standardize(values, params.log2_means, params.log2_sds)


def write_matrix_csv(matrix: np.ndarray, path: str, feature_names=None, sample_ids=None) -> None:
    """Write a transformed matrix; numerals parse back to the same floats."""
    matrix = np.asarray(matrix)
    with open(path, "w", encoding="utf-8") as fh:
        if feature_names is not None:
            header = list(feature_names)
            if sample_ids is not None:
                header = ["sample_id", *header]
            fh.write(",".join(header) + "\n")
        for i in range(matrix.shape[0]):
            cells = [repr(float(v)) for v in matrix[i]]
            if sample_ids is not None:
                cells = [str(sample_ids[i]), *cells]
            fh.write(",".join(cells) + "\n")
