"""Solvency-band classification toolkit for non-life insurers.

Capabilities: CAR-band labeling of insurer-year records, seeded synthetic
data generation, correlation-based feature selection, class rebalancing
(bias-to-uniform resampling and SMOTE), gain-ratio decision trees with
confidence-factor pruning, and stratified cross-validation reporting.
"""

from .balance import BalanceTargets, nearest_neighbors, resample, smote
from .dataset import (
    ATTRIBUTE_NAMES,
    CLASS_ALPHABET,
    CSV_BASE_COLUMNS,
    ActionLevel,
    CompanyRecord,
    CsvFormatError,
    Dataset,
    SolvencyClass,
    class_distribution,
    label_from_car,
    load_csv,
    stratified_split,
    write_csv,
)
from .datagen import GeneratorSpec, generate
from .evaluate import (
    ConfusionMatrix,
    EvalReport,
    cross_validate,
    evaluate_on,
    mae,
    render_report,
    report_from_predictions,
    rmse,
    stratified_folds,
    summary_lines,
)
from .features import (
    DiscretizedView,
    FeatureSubset,
    cfs_merit,
    discretize,
    greedy_stepwise,
    merit_from_correlations,
    symmetric_uncertainty,
)
from .tree import (
    Leaf,
    LearnerParams,
    Split,
    SplitCandidate,
    TreeModel,
    TreeNode,
    best_split,
    entropy,
    grow,
    grow_unpruned,
    invert_binomial_tail,
    node_count,
    pessimistic_error,
    predict,
    prune,
)
from .tree_io import ModelFormatError, parse, read_model, render_text, serialize, write_model
from .cli import PipelineConfig

__all__ = [
    "ATTRIBUTE_NAMES",
    "ActionLevel",
    "BalanceTargets",
    "CLASS_ALPHABET",
    "CSV_BASE_COLUMNS",
    "CompanyRecord",
    "ConfusionMatrix",
    "CsvFormatError",
    "Dataset",
    "DiscretizedView",
    "EvalReport",
    "FeatureSubset",
    "GeneratorSpec",
    "Leaf",
    "LearnerParams",
    "ModelFormatError",
    "PipelineConfig",
    "SolvencyClass",
    "Split",
    "SplitCandidate",
    "TreeModel",
    "TreeNode",
    "best_split",
    "cfs_merit",
    "class_distribution",
    "cross_validate",
    "discretize",
    "entropy",
    "evaluate_on",
    "generate",
    "greedy_stepwise",
    "grow",
    "grow_unpruned",
    "invert_binomial_tail",
    "label_from_car",
    "load_csv",
    "mae",
    "merit_from_correlations",
    "nearest_neighbors",
    "node_count",
    "parse",
    "pessimistic_error",
    "predict",
    "prune",
    "read_model",
    "render_report",
    "render_text",
    "report_from_predictions",
    "resample",
    "rmse",
    "serialize",
    "smote",
    "stratified_folds",
    "stratified_split",
    "summary_lines",
    "write_csv",
    "write_model",
]

__version__ = "0.1.0"
