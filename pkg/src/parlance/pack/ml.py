"""Multinomial logistic regression over collections, with cross-validation.

Training is full-batch gradient descent from a zero initialization, so a
fixed seed plus fixed hyperparameters make every fit bit-reproducible.
"""

import numpy as np

from ..errors import (
    BadFolds,
    EmptyFeatures,
    LengthMismatch,
    SingleClass,
    UntrainedModel,
)
from ..values import Collection, ModelRef

EPOCHS = 400
LEARNING_RATE = 0.5
L2_PENALTY = 1e-4


def feature_matrix(features):
    """Numeric columns of a collection as (names, rows-by-features array)."""
    names = features.numeric_names
    if not names:
        raise EmptyFeatures("I need at least one numeric feature column.")
    stacked = np.array([features.column(n).values for n in names], dtype=float)
    return list(names), stacked.T


def _softmax(scores):
    shifted = scores - scores.max(axis=1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=1, keepdims=True)


def _fit(matrix, class_idx, n_classes):
    n_rows, n_feats = matrix.shape
    weights = np.zeros((n_classes, n_feats))
    bias = np.zeros(n_classes)
    onehot = np.eye(n_classes)[class_idx]
    for _ in range(EPOCHS):
        probs = _softmax(matrix @ weights.T + bias)
        err = (probs - onehot) / n_rows
        weights -= LEARNING_RATE * (err.T @ matrix + L2_PENALTY * weights)
        bias -= LEARNING_RATE * err.sum(axis=0)
    return weights, bias


def train_logistic(features, labels, seed=13):
    """Fit a standardized multinomial classifier on a collection's numeric columns."""
    names, matrix = feature_matrix(features)
    labels = [str(v) for v in labels]
    if len(labels) != matrix.shape[0]:
        raise LengthMismatch("Labels must have one entry per feature row.")
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise SingleClass("I need at least two distinct classes to train.")
    means = matrix.mean(axis=0)
    scales = matrix.std(axis=0)
    scales = np.where(scales > 0.0, scales, 1.0)
    standardized = (matrix - means) / scales
    class_idx = np.array([classes.index(v) for v in labels])
    weights, bias = _fit(standardized, class_idx, len(classes))
    return ModelRef(
        kind="logistic_classifier",
        trained=True,
        feature_names=tuple(names),
        classes=tuple(classes),
        weights=tuple(tuple(float(w) for w in row) for row in weights),
        bias=tuple(float(b) for b in bias),
        feature_means=tuple(float(m) for m in means),
        feature_scales=tuple(float(s) for s in scales),
        seed=int(seed),
    )


def predict(model, features):
    """Class labels for each row of the collection's numeric columns."""
    if not model.trained:
        raise UntrainedModel("That model has not been trained yet.")
    names, matrix = feature_matrix(features)
    if tuple(names) != model.feature_names:
        matrix = np.array(
            [features.column(n).values for n in model.feature_names], dtype=float
        ).T
    standardized = (matrix - np.array(model.feature_means)) / np.array(model.feature_scales)
    scores = standardized @ np.array(model.weights).T + np.array(model.bias)
    return [model.classes[i] for i in scores.argmax(axis=1)]


def accuracy(model, features, labels):
    predicted = predict(model, features)
    labels = [str(v) for v in labels]
    if len(labels) != len(predicted):
        raise LengthMismatch("Labels must have one entry per feature row.")
    hits = sum(1 for got, want in zip(predicted, labels) if got == want)
    return hits / len(labels)


def coefficient_rows(model):
    """(class, feature, weight) triples in class-major order."""
    if not model.trained:
        raise UntrainedModel("That model has not been trained yet.")
    rows = []
    for cls, row in zip(model.classes, model.weights):
        for feat, weight in zip(model.feature_names, row):
            rows.append((cls, feat, float(weight)))
    return rows


def stratified_folds(labels, folds, seed):
    """Fold index per row: per-class seeded shuffle dealt round-robin."""
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(str(label), []).append(i)
    if folds < 2 or folds > len(labels):
        raise BadFolds("The number of folds must be between 2 and the row count.")
    smallest = min(len(rows) for rows in by_class.values())
    if smallest < folds:
        raise BadFolds(
            "Stratification needs every class to appear in every fold; "
            "the smallest class has only %d rows." % smallest
        )
    rng = np.random.default_rng(int(seed))
    assignment = [0] * len(labels)
    for cls in sorted(by_class):
        indices = np.array(by_class[cls])
        rng.shuffle(indices)
        for position, row in enumerate(indices):
            assignment[int(row)] = position % folds
    return assignment


def cross_validate(model_spec, features, labels, folds, metric="accuracy", seed=0):
    """Per-fold held-out scores under stratified k-fold with a seeded shuffle."""
    if metric != "accuracy":
        raise ValueError("unsupported metric: %r" % (metric,))
    labels = [str(v) for v in labels]
    _, matrix = feature_matrix(features)
    if len(labels) != matrix.shape[0]:
        raise LengthMismatch("Labels must have one entry per feature row.")
    assignment = stratified_folds(labels, int(folds), seed)
    scores = []
    for fold in range(int(folds)):
        train_rows = [i for i, f in enumerate(assignment) if f != fold]
        test_rows = [i for i, f in enumerate(assignment) if f == fold]
        fitted = train_logistic(
            features.take_rows(train_rows),
            [labels[i] for i in train_rows],
            seed=model_spec.seed,
        )
        scores.append(
            accuracy(fitted, features.take_rows(test_rows), [labels[i] for i in test_rows])
        )
    return scores
