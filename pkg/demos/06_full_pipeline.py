"""The whole early-warning pipeline, two ways: resample model vs SMOTE model.

Generate an imbalanced training window and a held-out year, rebalance the
training data each way, fit pruned trees, and compare supplied-test-set
reports. Finish with the model text format round trip.
"""

from solvtree import (
    GeneratorSpec,
    LearnerParams,
    class_distribution,
    evaluate_on,
    generate,
    grow,
    parse,
    render_report,
    render_text,
    resample,
    serialize,
    smote,
)

train = generate(GeneratorSpec(class_counts=(44, 13, 16, 543), separation=3.0, seed=23))
test = generate(GeneratorSpec(class_counts=(6, 1, 1, 57), separation=3.0, seed=24))
print("training window:", class_distribution(train))
print("held-out year:  ", class_distribution(test))

params = LearnerParams(confidence_factor=0.25, min_leaf=2)

balanced = resample(train, bias_to_uniform=1.0, sample_size_percent=100.0, seed=23)
resample_model = grow(balanced, params)
print("\nresample model on the held-out year:")
print(render_report(evaluate_on(resample_model, test)))

majority = max(class_distribution(train))
smoted = smote(train, (majority, majority, majority, majority), k_neighbors=5, seed=23)
smote_model = grow(smoted, params)
print("smote model on the held-out year:")
print(render_report(evaluate_on(smote_model, test)))

text = serialize(resample_model)
assert parse(text) == resample_model
print("model file round trip: ok,", len(text.splitlines()), "lines")
print("\nresample model:")
print(render_text(resample_model))
