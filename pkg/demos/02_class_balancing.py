"""Correcting class imbalance: bias-to-uniform resampling and SMOTE.

Solvency data is badly skewed (hundreds of strong insurers, a handful of
weak ones), which flattens most classifiers into "predict strong". Two
corrections: draw a bootstrap whose class probabilities are pushed toward
uniform, or synthesize new minority rows between nearest neighbors.
"""

from solvtree import (
    GeneratorSpec,
    class_distribution,
    generate,
    resample,
    smote,
)

ds = generate(GeneratorSpec(class_counts=(45, 13, 17, 541), separation=6.0, seed=11))
before = class_distribution(ds)
print("original            (I, W, M, S):", before, " total", sum(before))

# Resampling with full bias draws each class with probability 1/4, so the
# 616 draws land near 154 per class while the total stays put.
res = resample(ds, bias_to_uniform=1.0, sample_size_percent=100.0, seed=3)
after = class_distribution(res)
print("resampled, bias 1.0 (I, W, M, S):", after, " total", sum(after))

# SMOTE keeps every original row and appends synthetic minority rows until
# each class reaches its absolute target count.
targets = (540, 533, 522, 541)
sm = smote(ds, target_counts=targets, k_neighbors=5, seed=3)
counts = class_distribution(sm)
print("smote to targets    (I, W, M, S):", counts, " total", sum(counts))

synthetic = [r for r in sm.records if r.is_synthetic]
print("\nsynthetic rows appended:", len(synthetic))
sample = synthetic[0]
print("a synthetic insolvency row (no company identity):")
print("  car =", round(sample.car, 3), " label =", sample.label.csv_name)
print("  V1..V4 =", [round(v, 3) for v in sample.values[:4]])
