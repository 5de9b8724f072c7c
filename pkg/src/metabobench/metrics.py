"""Confusion-matrix metrics, ROC AUC and cross-fold aggregation.

Conventions for degenerate folds: a zero denominator yields 0.0 (and AUC on
a single-class fold yields 0.5), with the affected metric names recorded in
``FoldMetrics.degenerate`` so reports can footnote them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadLabelError, EmptyAggregateError, LengthMismatchError

METRIC_FIELDS = ("auc", "balanced_accuracy", "mcc", "specificity", "sensitivity", "f1", "precision")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class FoldMetrics:
    auc: float
    balanced_accuracy: float
    mcc: float
    specificity: float
    sensitivity: float
    f1: float
    precision: float
    degenerate: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        d = {name: getattr(self, name) for name in METRIC_FIELDS}
        d["degenerate"] = list(self.degenerate)
        return d


def _check_binary(vec: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(vec)
    if not np.isin(arr, (0, 1)).all():
        raise BadLabelError(f"{what} must contain only 0/1 values")
    return arr.astype(np.int64)


def confusion(labels_true, labels_pred) -> ConfusionCounts:
    """Count tp/tn/fp/fn with class 1 as positive."""
    y = _check_binary(labels_true, "labels_true")
    yhat = _check_binary(labels_pred, "labels_pred")
    if y.shape != yhat.shape:
        raise LengthMismatchError(f"length mismatch: {y.shape[0]} true vs {yhat.shape[0]} predicted")
    tp = int(((y == 1) & (yhat == 1)).sum())
    tn = int(((y == 0) & (yhat == 0)).sum())
    fp = int(((y == 0) & (yhat == 1)).sum())
    fn = int(((y == 1) & (yhat == 0)).sum())
    return ConfusionCounts(tp, tn, fp, fn)


def specificity(c: ConfusionCounts) -> float:
    """TN / (TN + FP); 0 when the fold has no negatives."""
    denom = c.tn + c.fp
    return c.tn / denom if denom else 0.0


def sensitivity(c: ConfusionCounts) -> float:
    """TP / (TP + FN); 0 when the fold has no positives."""
    denom = c.tp + c.fn
    return c.tp / denom if denom else 0.0


def balanced_accuracy(c: ConfusionCounts) -> float:
    """Mean of sensitivity and specificity."""
    return (sensitivity(c) + specificity(c)) / 2.0


def precision(c: ConfusionCounts) -> float:
    """TP / (TP + FP); 0 when nothing was predicted positive."""
    denom = c.tp + c.fp
    return c.tp / denom if denom else 0.0


def mcc(c: ConfusionCounts) -> float:
    """Matthews correlation; 0 whenever the denominator has a zero factor."""
    denom_sq = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    if denom_sq == 0:
        return 0.0
    return (c.tp * c.tn - c.fp * c.fn) / math.sqrt(denom_sq)


def f1(c: ConfusionCounts) -> float:
    """Harmonic mean of precision and sensitivity; 0 if either is undefined-zero."""
    p = precision(c)
    s = sensitivity(c)
    if p + s == 0:
        return 0.0
    return 2.0 * p * s / (p + s)


def roc_auc(scores, labels) -> float:
    """Area under the ROC curve by trapezoid over the full threshold sweep.

    Tied scores enter the curve together, which credits half for each tied
    positive/negative pair; a single-class input is defined as 0.5.
    """
    return _roc_auc_flagged(scores, labels)[0]


def _roc_auc_flagged(scores, labels) -> tuple[float, bool]:
    s = np.asarray(scores, dtype=np.float64)
    y = _check_binary(labels, "labels")
    if s.shape != y.shape:
        raise LengthMismatchError(f"length mismatch: {s.shape[0]} scores vs {y.shape[0]} labels")
    n_pos = int(y.sum())
    n_neg = y.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.5, True
    order = np.argsort(-s, kind="stable")
    y_sorted = y[order]
    s_sorted = s[order]
    # group boundaries: positions after which the score strictly drops
    boundary = np.flatnonzero(np.concatenate((s_sorted[1:] != s_sorted[:-1], [True])))
    cum_tp = np.cumsum(y_sorted)[boundary]
    cum_fp = (boundary + 1) - cum_tp
    tpr = np.concatenate(([0.0], cum_tp / n_pos))
    fpr = np.concatenate(([0.0], cum_fp / n_neg))
    area = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return area, False


def compute_fold_metrics(labels_true, labels_pred, scores) -> FoldMetrics:
    """Assemble all per-fold metrics, recording which hit a degenerate case."""
    c = confusion(labels_true, labels_pred)
    degenerate = []
    if c.tn + c.fp == 0:
        degenerate.append("specificity")
    if c.tp + c.fn == 0:
        degenerate.append("sensitivity")
    if c.tp + c.fp == 0:
        degenerate.extend(["precision", "f1"])
    auc, auc_degenerate = _roc_auc_flagged(scores, labels_true)
    if auc_degenerate:
        degenerate.append("auc")
    sens = sensitivity(c)
    spec = specificity(c)
    return FoldMetrics(
        auc=auc,
        balanced_accuracy=(sens + spec) / 2.0,
        mcc=mcc(c),
        specificity=spec,
        sensitivity=sens,
        f1=f1(c),
        precision=precision(c),
        degenerate=tuple(degenerate),
    )


def aggregate_folds(per_fold: list[FoldMetrics]) -> dict[str, tuple[float, float]]:
    """Arithmetic mean and sample SD (n-1) per metric; a single fold has SD 0."""
    if not per_fold:
        raise EmptyAggregateError("no folds to aggregate")
    out: dict[str, tuple[float, float]] = {}
    for name in METRIC_FIELDS:
        vals = np.array([getattr(fm, name) for fm in per_fold], dtype=np.float64)
        mean = float(vals.mean())
        sd = float(vals.std(ddof=1)) if vals.shape[0] > 1 else 0.0
        out[name] = (mean, sd)
    return out
