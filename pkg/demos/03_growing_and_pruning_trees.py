"""Gain-ratio tree induction and confidence-factor pruning.

Splits are binary thresholds at observed values, chosen by gain ratio among
above-average-gain candidates, with at least two records on each side.
Pruning replaces a subtree by a leaf whenever the leaf's pessimistic error
bound (an inverted binomial tail) does not exceed the subtree's.
"""

from solvtree import (
    GeneratorSpec,
    LearnerParams,
    generate,
    grow,
    grow_unpruned,
    node_count,
    pessimistic_error,
    predict,
    prune,
    render_text,
)

# Low separation so classes overlap: the unpruned tree memorizes noise and
# pruning has something to remove.
ds = generate(GeneratorSpec(class_counts=(30, 20, 20, 50), separation=0.8, seed=5))

params = LearnerParams(confidence_factor=0.25, min_leaf=2)
unpruned = grow_unpruned(ds, params)
pruned = grow(ds, params)


def training_accuracy(model):
    return sum(predict(model, r)[0] is r.label for r in ds.records) / len(ds)


print("unpruned:", node_count(unpruned.root), "nodes,",
      f"training accuracy {training_accuracy(unpruned):.3f}")
print("pruned:  ", node_count(pruned.root), "nodes,",
      f"training accuracy {training_accuracy(pruned):.3f}")

print("\npruned tree:")
print(render_text(pruned))

print("pessimistic error bound at confidence factor 0.25:")
for n in (2, 5, 10, 50):
    row = "  ".join(f"e={e}: {pessimistic_error(min(e, n), n, 0.25):.3f}" for e in (0, 1, 3))
    print(f"  n={n:>3}  {row}")
print("(small leaves are charged a much larger error bound, which is what")
print(" pushes the bottom of an overgrown tree back up into its parents)")

sizes = [node_count(prune(unpruned.root, cf)) for cf in (0.5, 0.25, 0.1, 0.01)]
print("\nnode count as the confidence factor tightens 0.5 -> 0.01:", sizes)
