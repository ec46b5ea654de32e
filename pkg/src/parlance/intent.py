"""Utterance-to-command routing: a multinomial logistic regression over
unigram and bigram features, retrained in full whenever an example is added.

Features are binary. Slot placeholders in authored examples are dropped and
bigrams bridge the gap, so "pearson correlation {x} {y}" contributes the
same evidence as "pearson correlation". Numerals fold into one NUM token.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateStoreWarning, EmptyRegistry, UnknownCommand
from .tokenizer import is_numeral, slot_name, tokenize

NUM_TOKEN = "NUM"


def featurize(utterance: str) -> set[str]:
    """Binary bag of unigrams and bigrams over normalized tokens."""
    words = []
    for token in tokenize(utterance):
        if slot_name(token) is not None:
            continue
        words.append(NUM_TOKEN if is_numeral(token) else token)
    features = set(words)
    features.update(f"{a}_{b}" for a, b in zip(words, words[1:]))
    return features


@dataclass(frozen=True)
class Hyperparams:
    l2: float = 1e-3
    lr: float = 0.5
    epochs: int = 200
    seed: int = 13


DEFAULT_HYPERPARAMS = Hyperparams()


@dataclass
class ExampleStore:
    """Append-only (utterance, command id, origin) rows with a version that
    bumps on every addition, so stale model snapshots are detectable."""

    rows: list[tuple[str, str, str]] = field(default_factory=list)
    version: int = 0

    @classmethod
    def from_registry(cls, registry) -> "ExampleStore":
        store = cls()
        for cmd in registry:
            for example in cmd.examples:
                store.rows.append((example, cmd.id, "authored"))
        return store

    def add(self, utterance: str, command_id: str, origin: str = "learned") -> None:
        self.rows.append((utterance, command_id, origin))
        self.version += 1

    def command_ids(self) -> tuple[str, ...]:
        return tuple(sorted({cmd_id for _, cmd_id, _ in self.rows}))

    def conflicting_rows(self) -> list[tuple[str, set[str]]]:
        """Utterances mapped to more than one command."""
        seen: dict[str, set[str]] = {}
        for utterance, cmd_id, _ in self.rows:
            seen.setdefault(utterance, set()).add(cmd_id)
        return [(u, ids) for u, ids in seen.items() if len(ids) > 1]

    def records(self) -> list[dict]:
        return [
            {"utterance": u, "command_id": c, "origin": o}
            for u, c, o in self.rows
        ]

    def load_records(self, records: Iterable[dict]) -> None:
        for r in records:
            self.rows.append((r["utterance"], r["command_id"], r.get("origin", "learned")))
        self.version += 1


@dataclass(frozen=True)
class IntentModel:
    command_ids: tuple[str, ...]
    vocabulary: dict[str, int]
    weights: np.ndarray  # (commands, features)
    bias: np.ndarray  # (commands,)
    hyperparams: Hyperparams
    store_version: int

    def feature_vector(self, utterance: str) -> np.ndarray:
        x = np.zeros(len(self.vocabulary))
        for feat in featurize(utterance):
            idx = self.vocabulary.get(feat)
            if idx is not None:
                x[idx] = 1.0
        return x


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def loss_and_gradients(
    weights: np.ndarray, bias: np.ndarray, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy with L2 on weights (bias unpenalized)."""
    n = x.shape[0]
    probs = _softmax(x @ weights.T + bias)
    ce = -np.log(probs[np.arange(n), y] + 1e-300).mean()
    loss = ce + 0.5 * l2 * float((weights ** 2).sum())
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grad_w = delta.T @ x + l2 * weights
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


def train(store: ExampleStore, hp: Hyperparams = DEFAULT_HYPERPARAMS) -> IntentModel:
    """Full-batch gradient descent from zero weights; deterministic."""
    if not store.rows:
        raise EmptyRegistry("no examples to train on")
    for utterance, command_ids in store.conflicting_rows():
        warnings.warn(
            f"utterance {utterance!r} is an example of several commands: "
            f"{sorted(command_ids)}",
            DegenerateStoreWarning,
        )
    commands = store.command_ids()
    class_index = {cmd_id: k for k, cmd_id in enumerate(commands)}
    vocabulary: dict[str, int] = {}
    featurized = [featurize(u) for u, _, _ in store.rows]
    for feats in featurized:
        for feat in sorted(feats):
            vocabulary.setdefault(feat, len(vocabulary))
    x = np.zeros((len(store.rows), len(vocabulary)))
    y = np.zeros(len(store.rows), dtype=int)
    for i, ((_, cmd_id, _), feats) in enumerate(zip(store.rows, featurized)):
        for feat in feats:
            x[i, vocabulary[feat]] = 1.0
        y[i] = class_index[cmd_id]
    weights = np.zeros((len(commands), len(vocabulary)))
    bias = np.zeros(len(commands))
    for _ in range(hp.epochs):
        _, grad_w, grad_b = loss_and_gradients(weights, bias, x, y, hp.l2)
        weights -= hp.lr * grad_w
        bias -= hp.lr * grad_b
    return IntentModel(
        command_ids=commands,
        vocabulary=vocabulary,
        weights=weights,
        bias=bias,
        hyperparams=hp,
        store_version=store.version,
    )


def predict_scores(model: IntentModel, utterance: str) -> dict[str, float]:
    x = model.feature_vector(utterance)
    probs = _softmax(model.weights @ x + model.bias)
    return {cmd_id: float(p) for cmd_id, p in zip(model.command_ids, probs)}


def predict_topk(
    model: IntentModel, utterance: str, k: int
) -> list[tuple[str, float]]:
    """Commands by descending score, ties by id; k clamps to class count."""
    scores = predict_scores(model, utterance)
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:max(1, k)]


def add_example(
    store: ExampleStore,
    utterance: str,
    command_id: str,
    known_ids: Sequence[str],
    hp: Hyperparams = DEFAULT_HYPERPARAMS,
) -> IntentModel:
    """Record a correction and retrain; the new model memorizes it."""
    if command_id not in known_ids:
        raise UnknownCommand(f"no command {command_id!r}")
    store.add(utterance, command_id)
    return train(store, hp)
