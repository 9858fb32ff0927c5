"""Stratified cross-validation and test-set scoring with tabular reports.

Reports carry a 4x4 confusion matrix (rows actual, columns predicted), per
class recall, overall accuracy, and probability-scored MAE/RMSE where each
instance contributes one residual per class against its one-hot label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .balance import BalanceTargets, resample, smote
from .dataset import CLASS_ALPHABET, N_CLASSES, Dataset, SolvencyClass, class_distribution
from .tree import LearnerParams, TreeModel, grow, predict


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts by (actual, predicted) class, both in alphabet order."""

    cells: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(tuple(int(c) for c in row) for row in self.cells))
        if len(self.cells) != N_CLASSES or any(len(r) != N_CLASSES for r in self.cells):
            raise ValueError("confusion matrix must be 4x4")

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.cells)

    @property
    def total(self) -> int:
        return sum(self.row_sums())

    @property
    def trace(self) -> int:
        return sum(self.cells[i][i] for i in range(N_CLASSES))


@dataclass(frozen=True)
class EvalReport:
    matrix: ConfusionMatrix
    per_class_recall: tuple[float, float, float, float]
    overall_accuracy: float
    mae: float
    rmse: float
    n: int
    warnings: tuple[str, ...] = ()


def mae(predicted_probs, actual) -> float:
    """Mean absolute residual between probability vectors and one-hot labels.

    Averages |p_ij - a_ij| over all n instances and all classes, so a
    confidently wrong one-hot prediction contributes 0.5.
    """
    P, A = _paired_probs(predicted_probs, actual)
    return float(np.abs(P - A).sum() / P.size)


def rmse(predicted_probs, actual) -> float:
    """Root mean squared residual over the same n * n_classes terms as mae."""
    P, A = _paired_probs(predicted_probs, actual)
    return float(math.sqrt(((P - A) ** 2).sum() / P.size))


def _as_label_indices(actual) -> np.ndarray:
    out = np.empty(len(actual), dtype=np.int64)
    for i, a in enumerate(actual):
        out[i] = a.value if isinstance(a, SolvencyClass) else int(a)
        if not 0 <= out[i] < N_CLASSES:
            raise ValueError(f"label index {out[i]} out of range")
    return out


def _paired_probs(predicted_probs, actual) -> tuple[np.ndarray, np.ndarray]:
    P = np.asarray(predicted_probs, dtype=float)
    if P.ndim != 2:
        raise ValueError("predicted_probs must be a (n, n_classes) array")
    idx = _as_label_indices(actual)
    if len(idx) != P.shape[0]:
        raise ValueError(f"length mismatch: {P.shape[0]} predictions vs {len(idx)} labels")
    sums = P.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > 1e-9):
        raise ValueError("each probability vector must sum to 1 within 1e-9")
    A = np.zeros_like(P)
    A[np.arange(len(idx)), idx] = 1.0
    return P, A


def report_from_predictions(
    actual, predicted, probs, warnings: Sequence[str] = ()
) -> EvalReport:
    """Assemble an EvalReport from pooled per-instance predictions."""
    a_idx = _as_label_indices(actual)
    p_idx = _as_label_indices(predicted)
    if len(a_idx) != len(p_idx):
        raise ValueError("actual and predicted lengths differ")
    n = len(a_idx)
    cells = [[0] * N_CLASSES for _ in range(N_CLASSES)]
    for a, p in zip(a_idx, p_idx):
        cells[a][p] += 1
    matrix = ConfusionMatrix(tuple(tuple(r) for r in cells))
    recalls = tuple(
        (matrix.cells[c][c] / rs) if rs else math.nan
        for c, rs in enumerate(matrix.row_sums())
    )
    accuracy = matrix.trace / n if n else math.nan
    return EvalReport(
        matrix=matrix,
        per_class_recall=recalls,
        overall_accuracy=accuracy,
        mae=mae(probs, a_idx),
        rmse=rmse(probs, a_idx),
        n=n,
        warnings=tuple(warnings),
    )


def stratified_folds(ds: Dataset, k: int, seed: int) -> list[list[int]]:
    """Partition record indices into k folds with per-class spread <= 1.

    Records are grouped by class in alphabet order, shuffled within each
    class, and dealt round-robin into folds with the dealing position
    carried across classes, which also keeps fold sizes within one of each
    other. Deterministic for a given seed.
    """
    n = len(ds)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"k = {k} exceeds the {n} available records")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    pos = 0
    for cls in CLASS_ALPHABET:
        idx = [i for i, r in enumerate(ds.records) if r.label is cls]
        perm = rng.permutation(len(idx))
        for p in perm:
            folds[pos % k].append(idx[int(p)])
            pos += 1
    if pos != n:
        raise ValueError("dataset has unlabeled records")
    return [sorted(f) for f in folds]


def _fold_seed(seed: int, fold: int) -> int:
    return int(np.random.SeedSequence(entropy=[seed, fold]).generate_state(1)[0])


def _balanced_training(
    train: Dataset, balance: BalanceTargets, seed: int, fold: int
) -> tuple[Dataset, list[str]]:
    counts = class_distribution(train)
    if balance.mode == "resample":
        if balance.bias_to_uniform > 0 and any(c == 0 for c in counts):
            missing = [
                cls.csv_name for cls, c in zip(CLASS_ALPHABET, counts) if c == 0
            ]
            return train, [
                f"fold {fold}: class {', '.join(missing)} absent from the training "
                f"portion; resampling skipped"
            ]
        return resample(train, balance.bias_to_uniform, balance.sample_size_percent, seed), []
    # smote: clamp targets to the fold's counts so shrunk folds stay valid
    targets = tuple(max(t, c) for t, c in zip(balance.target_counts, counts))
    starving = [
        cls.csv_name
        for cls, t, c in zip(CLASS_ALPHABET, targets, counts)
        if t > c and c < 2
    ]
    if starving:
        return train, [
            f"fold {fold}: class {', '.join(starving)} has fewer than 2 training "
            f"members; oversampling skipped"
        ]
    return smote(train, targets, balance.k_neighbors, seed), []


def cross_validate(
    ds: Dataset,
    k: int,
    params: LearnerParams = LearnerParams(),
    balance: BalanceTargets | None = None,
    seed: int = 0,
) -> EvalReport:
    """k-fold cross-validation pooling every held-out prediction.

    When a balancing transform is given it is applied to each fold's
    training portion only; held-out records are never balanced. A fold
    whose training portion cannot be balanced (a class missing entirely,
    or too small for synthesis) is trained unbalanced and noted in the
    report warnings. Per-fold balancing seeds derive from (seed, fold), so
    the whole run is deterministic given its seed.
    """
    folds = stratified_folds(ds, k, seed)
    warnings: list[str] = []
    actual: list[int] = []
    predicted: list[int] = []
    probs: list[np.ndarray] = []
    for i, fold in enumerate(folds):
        holdout = set(fold)
        train = Dataset(
            tuple(r for j, r in enumerate(ds.records) if j not in holdout), ds.schema
        )
        if balance is not None:
            train, notes = _balanced_training(train, balance, _fold_seed(seed, i), i)
            warnings.extend(notes)
        model = grow(train, params)
        for j in fold:
            cls, p = predict(model, ds.records[j])
            actual.append(ds.records[j].label.value)
            predicted.append(cls.value)
            probs.append(p)
    return report_from_predictions(actual, predicted, np.array(probs), warnings)


def evaluate_on(model: TreeModel, test: Dataset) -> EvalReport:
    """Score a fitted model on a labeled test set; no retraining."""
    missing = [a for a in model.schema if a not in test.schema]
    if missing:
        raise ValueError(f"test set schema lacks model attributes: {', '.join(missing)}")
    if len(test) == 0:
        raise ValueError("test set is empty")
    actual = []
    predicted = []
    probs = []
    for i, r in enumerate(test.records):
        if r.label is None:
            raise ValueError(f"test record {i} is unlabeled")
        cls, p = predict(model, r)
        actual.append(r.label.value)
        predicted.append(cls.value)
        probs.append(p)
    return report_from_predictions(actual, predicted, np.array(probs))


_SHORT = {cls: cls.name[0] for cls in CLASS_ALPHABET}  # I, W, M, S


def _pct(value: float) -> str:
    return "   n/a" if math.isnan(value) else f"{100.0 * value:5.1f}%"


def render_report(report: EvalReport) -> str:
    """Plain-text table: one row per actual class, then a summary block."""
    m = report.matrix
    header = f"{'Classification':<14}" + "".join(
        f"{_SHORT[c]:>7}" for c in CLASS_ALPHABET
    ) + f"{'Total':>9}{'Correct (%)':>14}"
    lines = [header]
    for c in CLASS_ALPHABET:
        row = m.cells[c.value]
        lines.append(
            f"{_SHORT[c]:<14}"
            + "".join(f"{v:>7}" for v in row)
            + f"{sum(row):>9}"
            + f"{_pct(report.per_class_recall[c.value]):>14}"
        )
    lines.append(
        f"{'Total':<14}" + " " * (7 * N_CLASSES) + f"{report.n:>9}"
        + f"{_pct(report.overall_accuracy):>14}"
    )
    lines.append("")
    lines.append("I = insolvency, W = weak, M = moderate, S = strong")
    lines.append("")
    lines.append(f"Overall accuracy: {report.overall_accuracy:.4f}")
    lines.append(f"MAE:              {report.mae:.4f}")
    lines.append(f"RMSE:             {report.rmse:.4f}")
    for w in report.warnings:
        lines.append(f"Warning: {w}")
    return "\n".join(lines) + "\n"


def summary_lines(report: EvalReport) -> str:
    """Machine-readable key=value rendering of the report."""
    lines = [
        f"n={report.n}",
        f"accuracy={report.overall_accuracy!r}",
        f"mae={report.mae!r}",
        f"rmse={report.rmse!r}",
    ]
    for c in CLASS_ALPHABET:
        lines.append(f"recall_{c.csv_name}={report.per_class_recall[c.value]!r}")
    for a in CLASS_ALPHABET:
        for p in CLASS_ALPHABET:
            lines.append(
                f"cell_{a.csv_name}_{p.csv_name}={report.matrix.cells[a.value][p.value]}"
            )
    lines.append(f"warnings={len(report.warnings)}")
    for i, w in enumerate(report.warnings, 1):
        lines.append(f"warning_{i}={w}")
    return "\n".join(lines) + "\n"
