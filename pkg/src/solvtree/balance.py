"""Class-imbalance correction: bias-to-uniform resampling and SMOTE synthesis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import (
    ATTRIBUTE_NAMES,
    CLASS_ALPHABET,
    N_CLASSES,
    CompanyRecord,
    Dataset,
    SolvencyClass,
    class_distribution,
    _round_half_up,
)


@dataclass(frozen=True)
class BalanceTargets:
    """Balancing request: one of two modes plus its knobs and a seed."""

    mode: str  # "resample" or "smote"
    bias_to_uniform: float = 1.0
    sample_size_percent: float = 100.0
    target_counts: tuple[int, int, int, int] | None = None
    k_neighbors: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("resample", "smote"):
            raise ValueError(f"mode must be 'resample' or 'smote', got {self.mode!r}")
        if not 0.0 <= self.bias_to_uniform <= 1.0:
            raise ValueError(f"bias_to_uniform must be in [0, 1], got {self.bias_to_uniform}")
        if self.sample_size_percent <= 0:
            raise ValueError(f"sample_size_percent must be > 0, got {self.sample_size_percent}")
        if self.k_neighbors < 1:
            raise ValueError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.mode == "smote":
            if self.target_counts is None:
                raise ValueError("smote mode needs target_counts")
            object.__setattr__(
                self, "target_counts", tuple(int(c) for c in self.target_counts)
            )
            if len(self.target_counts) != N_CLASSES:
                raise ValueError("target_counts must have one entry per class")


def resample(
    ds: Dataset,
    bias_to_uniform: float = 1.0,
    sample_size_percent: float = 100.0,
    seed: int = 0,
) -> Dataset:
    """Sample with replacement, nudging class probabilities toward uniform.

    Draws N = round(sample_size_percent/100 * n) records. Each draw picks
    class c with probability (1-b) * n_c/n + b/4 where b is
    ``bias_to_uniform``, then a uniformly random member of that class.
    A class with no members that would still receive positive probability
    is an error. Deterministic for a given seed; output rows are the input
    rows themselves, repeated as drawn.
    """
    if not 0.0 <= bias_to_uniform <= 1.0:
        raise ValueError(f"bias_to_uniform must be in [0, 1], got {bias_to_uniform}")
    if sample_size_percent <= 0:
        raise ValueError(f"sample_size_percent must be > 0, got {sample_size_percent}")
    n = len(ds)
    if n == 0:
        raise ValueError("cannot resample an empty dataset")
    counts = class_distribution(ds)
    probs = np.array(
        [
            (1.0 - bias_to_uniform) * c / n + bias_to_uniform / N_CLASSES
            for c in counts
        ]
    )
    for cls, c, p in zip(CLASS_ALPHABET, counts, probs):
        if p > 0 and c == 0:
            raise ValueError(
                f"class {cls.csv_name} has no members but draw probability {p:.6g}"
            )
    members = [
        [i for i, r in enumerate(ds.records) if r.label is cls] for cls in CLASS_ALPHABET
    ]
    size = _round_half_up(sample_size_percent / 100.0 * n)
    rng = np.random.default_rng(seed)
    class_draws = rng.choice(N_CLASSES, size=size, p=probs)
    out = []
    for c in class_draws:
        pool = members[int(c)]
        out.append(ds.records[pool[int(rng.integers(len(pool)))]])
    return Dataset(tuple(out), ds.schema)


def nearest_neighbors(
    query: CompanyRecord,
    pool: Sequence[CompanyRecord],
    k: int,
    schema: Sequence[str] = ATTRIBUTE_NAMES,
) -> list[CompanyRecord]:
    """The k pool records closest to the query, by Euclidean distance.

    Distance is computed over the schema attributes only. Results come in
    ascending distance; ties keep pool order; a pool smaller than k is
    returned whole. The pool must exclude the query row itself.
    """
    if not pool:
        raise ValueError("pool must not be empty")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    q = np.array([query.value(a) for a in schema])
    P = np.array([[r.value(a) for a in schema] for r in pool])
    d = np.sqrt(((P - q) ** 2).sum(axis=1))
    order = np.argsort(d, kind="stable")[:k]
    return [pool[int(i)] for i in order]


def _interpolate(
    base: CompanyRecord, neighbor: CompanyRecord, u: float, cls: SolvencyClass
) -> CompanyRecord:
    # All numeric columns move with the same factor so the synthetic row is a
    # valid CSV row; car stays in its band because bands are intervals.
    values = tuple(a + u * (b - a) for a, b in zip(base.values, neighbor.values))
    car = base.car + u * (neighbor.car - base.car)
    return CompanyRecord(None, None, None, None, car, values, cls)


def smote(
    ds: Dataset,
    target_counts: Sequence[int],
    k_neighbors: int = 5,
    seed: int = 0,
) -> Dataset:
    """Oversample classes up to absolute per-class target counts.

    For each class, target - current synthetic records are appended. A
    synthetic record interpolates between a class member (members cycle in
    dataset order) and one of its k nearest same-class neighbors, at a
    uniform random fraction of the segment. Originals are kept unmodified;
    synthetic rows carry the class label but no company identity. Per-class
    random streams derive from (seed, class index), so synthesis is
    deterministic and classes are independent.
    """
    targets = tuple(int(c) for c in target_counts)
    if len(targets) != N_CLASSES:
        raise ValueError("target_counts must have one entry per class")
    if k_neighbors < 1:
        raise ValueError(f"k_neighbors must be >= 1, got {k_neighbors}")
    counts = class_distribution(ds)
    for cls, have, want in zip(CLASS_ALPHABET, counts, targets):
        if want < have:
            raise ValueError(
                f"target {want} below current count {have} for class {cls.csv_name}"
            )
        if want > have and have < 2:
            raise ValueError(
                f"class {cls.csv_name} needs at least 2 members to synthesize, has {have}"
            )
    synthetics: list[CompanyRecord] = []
    for cls in CLASS_ALPHABET:
        deficit = targets[cls.value] - counts[cls.value]
        if deficit == 0:
            continue
        members = [r for r in ds.records if r.label is cls]
        rng = np.random.default_rng(np.random.SeedSequence(entropy=[seed, cls.value]))
        neighbor_cache: dict[int, list[CompanyRecord]] = {}
        for t in range(deficit):
            s = t % len(members)
            if s not in neighbor_cache:
                pool = members[:s] + members[s + 1 :]
                neighbor_cache[s] = nearest_neighbors(members[s], pool, k_neighbors, ds.schema)
            neighbors = neighbor_cache[s]
            neighbor = neighbors[int(rng.integers(len(neighbors)))]
            u = float(rng.random())
            synthetics.append(_interpolate(members[s], neighbor, u, cls))
    return Dataset(ds.records + tuple(synthetics), ds.schema)
