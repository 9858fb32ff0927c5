"""Gain-ratio decision trees over numeric attributes with pessimistic pruning.

Induction follows the classic recipe: binary splits at observed attribute
values, gain ratio with an above-average-gain prefilter, a minimum number of
training records on both sides of every split, and bottom-up leaf
replacement driven by an inverted binomial tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy import stats

from .dataset import CLASS_ALPHABET, N_CLASSES, CompanyRecord, Dataset, SolvencyClass

# Score comparisons treat differences within this slack as ties so exact
# mathematical ties are not broken by rounding noise.
_TIE_EPS = 1e-12

_BISECTION_TOL = 1e-9


@dataclass(frozen=True)
class LearnerParams:
    """Induction settings. Defaults: confidence factor 0.25, two records per leaf."""

    confidence_factor: float = 0.25
    min_leaf: int = 2
    max_depth: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.confidence_factor <= 0.5:
            raise ValueError(
                f"confidence_factor must be in (0, 0.5], got {self.confidence_factor}"
            )
        if self.min_leaf < 1:
            raise ValueError(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth}")


@dataclass(frozen=True)
class Leaf:
    class_counts: tuple[int, int, int, int]
    predicted: SolvencyClass


@dataclass(frozen=True)
class Split:
    attribute: str
    threshold: float
    left: "TreeNode"  # routed when value <= threshold
    right: "TreeNode"  # routed when value > threshold


TreeNode = Union[Leaf, Split]


@dataclass(frozen=True)
class TreeModel:
    root: TreeNode
    params: LearnerParams
    schema: tuple[str, ...]
    training_fingerprint: tuple[int, tuple[int, int, int, int]]


def entropy(counts) -> float:
    """Shannon entropy in bits of a count vector; the total must be positive."""
    vals = [float(c) for c in counts]
    if any(c < 0 for c in vals):
        raise ValueError("counts must be non-negative")
    total = sum(vals)
    if total <= 0:
        raise ValueError("entropy needs at least one positive count")
    return -sum((c / total) * math.log2(c / total) for c in vals if c > 0)


@lru_cache(maxsize=None)
def _counts_entropy(counts: tuple[int, ...], total: int) -> float:
    return -sum((c / total) * math.log2(c / total) for c in counts if c > 0)


@dataclass(frozen=True)
class SplitCandidate:
    attribute_index: int
    threshold: float
    gain: float
    gain_ratio: float


def best_split(values, labels, params: LearnerParams = LearnerParams()) -> SplitCandidate | None:
    """Pick the binary split maximizing gain ratio among above-average-gain cuts.

    Candidate thresholds are the distinct observed values of each attribute
    (a row goes left when its value is <= the threshold) whose partition
    keeps at least ``params.min_leaf`` records on both sides. Among the
    candidates whose information gain reaches the mean gain of all
    candidates, the largest gain ratio wins; ties fall to the earliest
    attribute, then the smallest threshold. Returns None for pure nodes and
    when no threshold satisfies the min_leaf constraint.

    ``values`` is an (n, k) array-like of attribute columns, ``labels`` the
    per-row class indices.
    """
    X = np.asarray(values, dtype=float)
    y = np.asarray(labels, dtype=np.int64)
    n = len(y)
    if n < 2:
        return None
    node_counts = np.bincount(y, minlength=N_CLASSES)
    if node_counts.max() == n:
        return None
    h_node = _counts_entropy(tuple(int(c) for c in node_counts), n)

    candidates: list[SplitCandidate] = []
    for a in range(X.shape[1]):
        col = X[:, a]
        order = np.argsort(col, kind="stable")
        vs = col[order]
        ys = y[order]
        cuts = np.nonzero(vs[:-1] < vs[1:])[0]
        if cuts.size == 0:
            continue
        onehot = np.zeros((n, N_CLASSES), dtype=np.int64)
        onehot[np.arange(n), ys] = 1
        cum = onehot.cumsum(axis=0)
        for i in cuts:
            nl = int(i) + 1
            nr = n - nl
            if nl < params.min_leaf or nr < params.min_leaf:
                continue
            left_counts = tuple(int(c) for c in cum[i])
            right_counts = tuple(int(t - l) for t, l in zip(node_counts, left_counts))
            gain = (
                h_node
                - (nl / n) * _counts_entropy(left_counts, nl)
                - (nr / n) * _counts_entropy(right_counts, nr)
            )
            split_info = _counts_entropy((nl, nr), n)
            candidates.append(
                SplitCandidate(a, float(vs[i]), gain, gain / split_info)
            )
    if not candidates:
        return None
    mean_gain = sum(c.gain for c in candidates) / len(candidates)
    eligible = [c for c in candidates if c.gain >= mean_gain - _TIE_EPS]
    best = eligible[0]
    for c in eligible[1:]:
        if c.gain_ratio > best.gain_ratio + _TIE_EPS:
            best = c
    return best


def _leaf_from_counts(counts) -> Leaf:
    counts = tuple(int(c) for c in counts)
    # argmax takes the first maximum, which is the class-alphabet tie-break
    predicted = CLASS_ALPHABET[int(np.argmax(counts))]
    return Leaf(counts, predicted)


def _grow_node(
    X: np.ndarray, y: np.ndarray, schema: tuple[str, ...], params: LearnerParams, depth: int
) -> TreeNode:
    counts = np.bincount(y, minlength=N_CLASSES)
    if counts.max() == counts.sum():
        return _leaf_from_counts(counts)
    if params.max_depth is not None and depth >= params.max_depth:
        return _leaf_from_counts(counts)
    cand = best_split(X, y, params)
    if cand is None:
        return _leaf_from_counts(counts)
    mask = X[:, cand.attribute_index] <= cand.threshold
    return Split(
        schema[cand.attribute_index],
        cand.threshold,
        _grow_node(X[mask], y[mask], schema, params, depth + 1),
        _grow_node(X[~mask], y[~mask], schema, params, depth + 1),
    )


def _fit_root(ds: Dataset, params: LearnerParams) -> tuple[TreeNode, tuple[int, tuple[int, int, int, int]]]:
    if len(ds) == 0:
        raise ValueError("cannot grow a tree on an empty dataset")
    X = ds.matrix()
    y = ds.label_indices()
    root = _grow_node(X, y, ds.schema, params, 0)
    counts = tuple(int(c) for c in np.bincount(y, minlength=N_CLASSES))
    return root, (len(ds), counts)


def grow_unpruned(ds: Dataset, params: LearnerParams = LearnerParams()) -> TreeModel:
    """Recursive partitioning only; exposed so pruning effects can be inspected."""
    root, fingerprint = _fit_root(ds, params)
    return TreeModel(root, params, ds.schema, fingerprint)


def grow(ds: Dataset, params: LearnerParams = LearnerParams()) -> TreeModel:
    """Grow by recursive partitioning, then prune with the confidence factor.

    Recursion stops at pure nodes, when no admissible split exists, or at
    ``params.max_depth``. Every leaf keeps the class counts of the training
    records routed to it.
    """
    root, fingerprint = _fit_root(ds, params)
    return TreeModel(prune(root, params.confidence_factor), params, ds.schema, fingerprint)


def pessimistic_error(misclassified: int, n: int, cf: float) -> float:
    """Upper confidence limit on a node's true error rate.

    Returns the p solving P[Binomial(n, p) <= misclassified] = cf. Zero
    errors use the closed form 1 - cf**(1/n); n errors give 1. Everything
    else inverts the exact binomial tail by bisection.
    """
    if not 0.0 < cf < 1.0:
        raise ValueError(f"cf must be in (0, 1), got {cf}")
    e = int(misclassified)
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= e <= n:
        raise ValueError(f"misclassified must be in [0, n], got {e} of {n}")
    return _pessimistic_error_cached(e, n, cf)


@lru_cache(maxsize=None)
def _pessimistic_error_cached(e: int, n: int, cf: float) -> float:
    if e == 0:
        return 1.0 - cf ** (1.0 / n)
    if e == n:
        return 1.0
    return invert_binomial_tail(e, n, cf)


def invert_binomial_tail(e: int, n: int, cf: float) -> float:
    """Solve P[Binomial(n, p) <= e] = cf for p by bisection to 1e-9."""
    lo, hi = 0.0, 1.0
    while hi - lo > _BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        # the tail is strictly decreasing in p
        if stats.binom.cdf(e, n, mid) >= cf:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _subtree_counts(node: TreeNode) -> np.ndarray:
    if isinstance(node, Leaf):
        return np.array(node.class_counts, dtype=np.int64)
    return _subtree_counts(node.left) + _subtree_counts(node.right)


def _estimated_leaf_errors(node: TreeNode, cf: float) -> float:
    if isinstance(node, Leaf):
        n = sum(node.class_counts)
        if n == 0:
            return 0.0
        e = n - max(node.class_counts)
        return n * pessimistic_error(e, n, cf)
    return _estimated_leaf_errors(node.left, cf) + _estimated_leaf_errors(node.right, cf)


def prune(root: TreeNode, cf: float) -> TreeNode:
    """Bottom-up leaf replacement wherever it does not raise the error bound.

    At each internal node the estimated subtree error (sum over its leaves
    of n * pessimistic_error) is compared with the error of a single
    majority leaf; the leaf wins ties. The pass is deterministic and
    idempotent.
    """
    if isinstance(root, Leaf):
        return root
    left = prune(root.left, cf)
    right = prune(root.right, cf)
    counts = _subtree_counts(left) + _subtree_counts(right)
    n = int(counts.sum())
    e = n - int(counts.max())
    subtree_error = _estimated_leaf_errors(left, cf) + _estimated_leaf_errors(right, cf)
    leaf_error = n * pessimistic_error(e, n, cf)
    if leaf_error <= subtree_error:
        return _leaf_from_counts(counts)
    return Split(root.attribute, root.threshold, left, right)


def predict(model: TreeModel, record: CompanyRecord) -> tuple[SolvencyClass, np.ndarray]:
    """Route a record to its leaf; returns (class, relative-frequency vector)."""
    node = model.root
    while isinstance(node, Split):
        node = node.left if record.value(node.attribute) <= node.threshold else node.right
    total = sum(node.class_counts)
    probs = np.array(node.class_counts, dtype=float) / total
    return node.predicted, probs


def node_count(node: TreeNode) -> int:
    """Number of nodes (splits plus leaves) in a subtree."""
    if isinstance(node, Leaf):
        return 1
    return 1 + node_count(node.left) + node_count(node.right)
