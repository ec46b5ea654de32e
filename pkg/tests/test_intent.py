import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parlance.errors import DegenerateStoreWarning, EmptyRegistry, UnknownCommand
from parlance.intent import (
    DEFAULT_HYPERPARAMS,
    ExampleStore,
    add_example,
    featurize,
    loss_and_gradients,
    predict_scores,
    predict_topk,
    train,
)


def store_of(rows):
    store = ExampleStore()
    for utterance, cmd_id in rows:
        store.rows.append((utterance, cmd_id, "authored"))
    return store


def test_featurize_unigrams_and_bigrams():
    assert featurize("find quartiles") == {"find", "quartiles", "find_quartiles"}


def test_featurize_folds_numerals():
    assert featurize("less than 7") == {
        "less", "than", "NUM", "less_than", "than_NUM"
    }


def test_featurize_empty_input():
    assert featurize("") == set()


def test_featurize_drops_slots_and_bridges_bigrams():
    assert featurize("pearson correlation {x} {y}") == {
        "pearson", "correlation", "pearson_correlation"
    }
    assert featurize("filter {c} by {col}") == {
        "filter", "by", "filter_by"
    }


def test_two_commands_memorize_their_examples():
    store = store_of([
        ("find quartiles", "quartiles"),
        ("quartiles of {array}", "quartiles"),
        ("compute quartiles", "quartiles"),
        ("pearson correlation", "pearson"),
        ("how are {x} and {y} correlated", "pearson"),
        ("correlate {x} with {y}", "pearson"),
    ])
    model = train(store)
    for utterance, cmd_id, _ in store.rows:
        assert predict_topk(model, utterance, 1)[0][0] == cmd_id


def test_identical_utterance_across_commands_warns():
    store = store_of([
        ("make model", "create_regressor"),
        ("make model", "create_classifier"),
    ])
    with pytest.warns(DegenerateStoreWarning):
        train(store)


def test_single_command_store_always_certain():
    store = store_of([("find quartiles", "quartiles")])
    model = train(store)
    for utterance in ("anything at all", "find quartiles", ""):
        (top, score), = predict_topk(model, utterance, 1)
        assert top == "quartiles"
        assert score == pytest.approx(1.0)


def test_empty_store_rejected():
    with pytest.raises(EmptyRegistry):
        train(ExampleStore())


def test_ties_break_lexicographically():
    # symmetric training data, then an input sharing no feature with either
    # class: logits tie exactly and the id order decides
    store = store_of([("foo", "zeta"), ("bar", "alpha")])
    model = train(store)
    ranked = predict_topk(model, "zzz unseen words", 2)
    assert [cmd for cmd, _ in ranked] == ["alpha", "zeta"]
    assert ranked[0][1] == pytest.approx(ranked[1][1])


def test_k_larger_than_command_count_returns_full_ranking():
    store = store_of([("foo", "a"), ("bar", "b")])
    model = train(store)
    assert len(predict_topk(model, "foo", 10)) == 2


def test_training_is_bit_stable():
    store = store_of([
        ("find quartiles", "quartiles"),
        ("pearson correlation", "pearson"),
        ("filter rows", "filter_below"),
    ])
    a, b = train(store), train(store)
    assert a.weights.tobytes() == b.weights.tobytes()
    assert a.bias.tobytes() == b.bias.tobytes()
    assert a.vocabulary == b.vocabulary


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(7)
    x = (rng.random((6, 5)) < 0.5).astype(float)
    y = rng.integers(0, 3, size=6)
    weights = rng.normal(size=(3, 5))
    bias = rng.normal(size=3)
    l2 = 1e-3
    _, grad_w, grad_b = loss_and_gradients(weights, bias, x, y, l2)
    eps = 1e-6

    def loss_at(w, b):
        return loss_and_gradients(w, b, x, y, l2)[0]

    for idx in np.ndindex(weights.shape):
        bumped = weights.copy()
        bumped[idx] += eps
        numeric = (loss_at(bumped, bias) - loss_at(weights, bias)) / eps
        assert grad_w[idx] == pytest.approx(numeric, abs=1e-4)
    for i in range(3):
        bumped = bias.copy()
        bumped[i] += eps
        numeric = (loss_at(weights, bumped) - loss_at(weights, bias)) / eps
        assert grad_b[i] == pytest.approx(numeric, abs=1e-4)


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="abcdefg 0123456789", max_size=30))
def test_scores_form_a_probability_simplex(utterance):
    store = store_of([
        ("find quartiles", "quartiles"),
        ("pearson correlation", "pearson"),
        ("filter rows below", "filter_below"),
        ("make a bar chart", "plot_bar"),
    ])
    model = train(store)
    scores = predict_scores(model, utterance)
    assert abs(sum(scores.values()) - 1.0) <= 1e-9
    assert all(0.0 <= s <= 1.0 for s in scores.values())


def misfire_store():
    return store_of([
        ("make a regression model", "create_regressor"),
        ("create a regression model", "create_regressor"),
        ("fit a linear regression", "create_regressor"),
        ("create a classification model", "create_classifier"),
        ("logistic regression classifier", "create_classifier"),
        ("build a classifier", "create_classifier"),
    ])


def test_one_correction_flips_the_misfire():
    store = misfire_store()
    model = train(store)
    assert predict_topk(model, "make model", 1)[0][0] == "create_regressor"
    version = store.version
    model = add_example(
        store, "make model", "create_classifier",
        known_ids=("create_regressor", "create_classifier"),
    )
    assert store.version == version + 1
    assert predict_topk(model, "make model", 1)[0][0] == "create_classifier"


def test_duplicate_example_keeps_ranking():
    store = misfire_store()
    known = ("create_regressor", "create_classifier")
    model = add_example(store, "make model", "create_classifier", known)
    before = [cmd for cmd, _ in predict_topk(model, "make model", 2)]
    model = add_example(store, "make model", "create_classifier", known)
    after = [cmd for cmd, _ in predict_topk(model, "make model", 2)]
    assert before == after


def test_unregistered_correction_rejected():
    store = misfire_store()
    with pytest.raises(UnknownCommand):
        add_example(store, "x", "nope", known_ids=("create_regressor",))


def test_store_records_round_trip():
    store = misfire_store()
    store.add("make model", "create_classifier")
    clone = ExampleStore()
    clone.load_records(store.records())
    assert clone.rows == store.rows
    assert train(clone).weights.tobytes() == train(store).weights.tobytes()


def test_model_snapshot_carries_store_version():
    store = misfire_store()
    model = train(store)
    assert model.store_version == store.version
    add_example(store, "make model", "create_classifier",
                known_ids=("create_classifier",))
    assert store.version == model.store_version + 1
