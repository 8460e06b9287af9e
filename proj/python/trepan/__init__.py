"""Ontology-guided decision-tree distillation."""

from ._trepan import (
    DecisionTree,
    Dataset,
    Error,
    FeatureSchema,
    MlpModel,
    Ontology,
    Oracle,
    accuracy,
    direct_induce,
    extract,
    fidelity,
    load_dataset,
    load_mlp,
    load_schema,
    parse_dataset,
    parse_schema,
    size_category,
    syntactic_complexity,
    train_mlp,
    train_test_split,
    tree_from_json,
)

__all__ = [
    "DecisionTree",
    "Dataset",
    "Error",
    "FeatureSchema",
    "MlpModel",
    "Ontology",
    "Oracle",
    "accuracy",
    "direct_induce",
    "extract",
    "fidelity",
    "load_dataset",
    "load_mlp",
    "load_schema",
    "parse_dataset",
    "parse_schema",
    "size_category",
    "syntactic_complexity",
    "train_mlp",
    "train_test_split",
    "tree_from_json",
]
