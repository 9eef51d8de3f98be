import numpy as np
import pytest

from ariabench.activations import Aria2, Aria2Params, Relu, Swish
from ariabench.data import Dataset, make_two_moons, split_train_test
from ariabench.errors import InvalidParamsError
from ariabench.model import (
    DenseSpec,
    ModelSpec,
    SoftmaxOutputSpec,
    build_model,
    desk_cnn_spec,
)
from ariabench.optim import AdamSpec, SGDSpec
from ariabench.rng import SplitMix64
from ariabench.train import TrainConfig, activation_hyperparams, evaluate, train


def moons_split():
    moons = make_two_moons(1000, 0.1, seed=3)
    return split_train_test(moons, 0.25, seed=5)


def mlp_spec(act, hidden=16, seed=42):
    return ModelSpec(
        layers=(DenseSpec(2, hidden, act), DenseSpec(hidden, 2), SoftmaxOutputSpec(2)),
        seed=seed,
    )


ADAM_CFG = TrainConfig(AdamSpec(lr=0.001), epochs=50, batch_size=2, shuffle_seed=7)


@pytest.mark.parametrize(
    "act", [Relu(), Swish(1.0), Aria2(Aria2Params(1.5, 1.0))], ids=lambda a: a.label
)
def test_two_moons_reaches_98_percent(act):
    tr, te = moons_split()
    model = build_model(mlp_spec(act))
    report = train(model, tr, te, ADAM_CFG)
    assert report.final_accuracy >= 0.98


def test_training_is_bit_deterministic():
    tr, te = moons_split()
    cfg = TrainConfig(AdamSpec(lr=0.001), epochs=5, batch_size=16, shuffle_seed=7)
    runs = []
    for _ in range(2):
        model = build_model(mlp_spec(Aria2(Aria2Params(1.5, 1.0))))
        runs.append((train(model, tr, te, cfg), model))
    rep_a, model_a = runs[0]
    rep_b, model_b = runs[1]
    assert rep_a.per_epoch == rep_b.per_epoch
    assert rep_a.run_id == rep_b.run_id
    for pa, pb in zip(model_a.parameters(), model_b.parameters()):
        np.testing.assert_array_equal(pa, pb)


def test_shuffle_seed_changes_trajectory():
    tr, te = moons_split()
    reports = []
    for seed in (1, 2):
        model = build_model(mlp_spec(Relu()))
        cfg = TrainConfig(AdamSpec(lr=0.001), epochs=2, batch_size=16, shuffle_seed=seed)
        reports.append(train(model, tr, te, cfg))
    assert reports[0].per_epoch != reports[1].per_epoch


def test_report_metadata():
    tr, te = moons_split()
    model = build_model(mlp_spec(Aria2(Aria2Params(1.5, 2.0))))
    cfg = TrainConfig(AdamSpec(lr=0.001), epochs=2, batch_size=64, shuffle_seed=7)
    report = train(model, tr, te, cfg)
    assert report.activation == "aria2(alpha=1.5,beta=2)"
    assert (report.alpha, report.beta) == (1.5, 2.0)
    assert [m.epoch for m in report.per_epoch] == [1, 2]
    assert report.wall_seconds > 0.0
    assert report.status == "ok"


def test_activation_hyperparams_extraction():
    tr, te = moons_split()
    assert activation_hyperparams(build_model(mlp_spec(Relu()))) == (None, None)
    assert activation_hyperparams(build_model(mlp_spec(Swish(2.0)))) == (None, 2.0)


def test_sgd_training_runs():
    tr, te = moons_split()
    model = build_model(mlp_spec(Relu()))
    cfg = TrainConfig(
        SGDSpec(lr=0.125, decay_factor=0.2, decay_epochs=(2,)),
        epochs=3,
        batch_size=32,
        shuffle_seed=7,
    )
    report = train(model, tr, te, cfg)
    assert len(report.per_epoch) == 3
    assert all(np.isfinite(m.train_loss) for m in report.per_epoch)


def test_evaluate_counts_argmax_hits():
    # single-layer model rigged for perfect and for all-wrong predictions
    model = build_model(ModelSpec(layers=(DenseSpec(2, 2), SoftmaxOutputSpec(2)), seed=0))
    model.layers[0].weight[:] = np.array([[10.0, -10.0], [-10.0, 10.0]])
    images = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    right = Dataset(images, np.array([0, 1, 0, 1]))
    wrong = Dataset(images, np.array([1, 0, 1, 0]))
    assert evaluate(model, right) == 1.0
    assert evaluate(model, wrong) == 0.0


def test_evaluate_known_confusion_count():
    model = build_model(ModelSpec(layers=(DenseSpec(1, 2), SoftmaxOutputSpec(2)), seed=0))
    model.layers[0].weight[:] = np.array([[5.0, -5.0]])
    # positive inputs predict class 0, negative predict class 1
    images = np.linspace(-1, 1, 10).reshape(10, 1)
    labels = np.zeros(10, dtype=np.int64)  # 5 negatives will be misclassified
    labels[images[:, 0] < 0] = 1
    labels[:3] = 0  # force 3 known mistakes among the negatives
    ds = Dataset(images, labels)
    assert evaluate(model, ds) == 7 / 10


def test_evaluate_tie_breaks_to_lowest_class():
    model = build_model(ModelSpec(layers=(DenseSpec(2, 3), SoftmaxOutputSpec(3)), seed=0))
    model.layers[0].weight[:] = 0.0  # uniform probabilities: all rows tie
    images = np.ones((4, 2))
    assert evaluate(model, Dataset(images, np.zeros(4, dtype=np.int64))) == 1.0
    assert evaluate(model, Dataset(images, np.ones(4, dtype=np.int64))) == 0.0


def test_desk_cnn_learns_template_classes():
    # 28x28 images drawn from three noisy class templates: the stock CNN
    # should separate them within a couple of epochs
    templates = SplitMix64(100).uniform((3, 1, 28, 28))

    def sample(n, seed):
        r = SplitMix64(seed)
        labels = (r.uniform(n) * 3).astype(np.int64)
        images = np.clip(templates[labels] + 0.15 * r.normal((n, 1, 28, 28)), 0, 1)
        return Dataset(images, labels)

    model = build_model(
        desk_cnn_spec(Aria2(Aria2Params(1.5, 1.0)), seed=42, dense_units=32, classes=3)
    )
    cfg = TrainConfig(AdamSpec(lr=0.003), epochs=3, batch_size=32, shuffle_seed=7)
    report = train(model, sample(300, 1), sample(90, 2), cfg)
    assert report.final_accuracy >= 0.95


def test_train_config_validation():
    with pytest.raises(InvalidParamsError):
        TrainConfig(AdamSpec(), epochs=0, batch_size=1)
    with pytest.raises(InvalidParamsError):
        TrainConfig(AdamSpec(), epochs=1, batch_size=0)


def test_empty_dataset_rejected():
    tr, te = moons_split()
    model = build_model(mlp_spec(Relu()))
    empty = Dataset(np.zeros((0, 2)), np.zeros(0, dtype=np.int64))
    with pytest.raises(InvalidParamsError):
        train(model, empty, te, ADAM_CFG)
    with pytest.raises(InvalidParamsError):
        evaluate(model, empty)
