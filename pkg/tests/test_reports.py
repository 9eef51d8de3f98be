import numpy as np
import pytest

from ariabench.activations import Aria2, Aria2Params, Relu, Swish
from ariabench.errors import InvalidParamsError
from ariabench.reports import (
    EpochMetrics,
    RunReport,
    write_curve_csv,
    write_report_csv,
    write_sweep_csv,
)


def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def test_curve_csv_relu(tmp_path):
    out = tmp_path / "relu.csv"
    write_curve_csv(Relu(), -1.0, 1.0, 3, out)
    header, rows = read_rows(out)
    assert header == ["x", "f", "df"]
    assert [[float(v) for v in r] for r in rows] == [
        [-1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [1.0, 1.0, 1.0],
    ]


def test_curve_csv_row_at_zero(tmp_path):
    out = tmp_path / "a.csv"
    write_curve_csv(Aria2(Aria2Params(1.0, 1.0)), -1.0, 1.0, 3, out)
    _, rows = read_rows(out)
    assert rows[1] == ["0.0", "0.0", "0.5"]


def test_curve_csv_negative_dip_shape(tmp_path):
    out = tmp_path / "dip.csv"
    write_curve_csv(Aria2(Aria2Params(1.5, 2.0)), -20.0, 20.0, 801, out)
    _, rows = read_rows(out)
    xs = np.array([float(r[0]) for r in rows])
    fs = np.array([float(r[1]) for r in rows])
    neg = fs[xs < 0]
    assert neg.min() < 0.0  # dips below zero left of the origin
    assert abs(fs[0]) < 1e-12  # and returns toward zero far left


def test_curve_csv_round_trips_at_full_precision(tmp_path):
    out = tmp_path / "prec.csv"
    act = Swish(1.0)
    write_curve_csv(act, -5.0, 5.0, 101, out)
    _, rows = read_rows(out)
    xs = np.linspace(-5.0, 5.0, 101)
    for row, x in zip(rows, xs):
        assert float(row[0]) == x
        assert float(row[1]) == act.value(x)
        assert float(row[2]) == act.derivative(x)


def test_curve_csv_validation(tmp_path):
    with pytest.raises(InvalidParamsError):
        write_curve_csv(Relu(), 0.0, 1.0, 1, tmp_path / "x.csv")
    with pytest.raises(InvalidParamsError):
        write_curve_csv(Relu(), 2.0, 1.0, 5, tmp_path / "x.csv")


def report(activation, accs, alpha=None, beta=None, status="ok", losses=None):
    per_epoch = [
        EpochMetrics(i + 1, 0.5 if losses is None else losses[i], a)
        for i, a in enumerate(accs)
    ]
    return RunReport(
        run_id=f"{activation}-x",
        activation=activation,
        per_epoch=per_epoch,
        wall_seconds=1.0,
        alpha=alpha,
        beta=beta,
        status=status,
    )


def test_sweep_csv_single_relu_row(tmp_path):
    out = tmp_path / "sweep.csv"
    write_sweep_csv([report("relu", [0.9])], out)
    header, rows = read_rows(out)
    assert header == ["activation", "alpha", "beta", "status", "final_accuracy"]
    assert rows == [["relu", "", "", "ok", "0.9"]]


def test_sweep_csv_ordering_and_checkpoints(tmp_path):
    out = tmp_path / "sweep.csv"
    accs30 = [0.5 + 0.01 * i for i in range(30)]
    reports = [
        report("aria2(alpha=1.5,beta=2)", accs30, alpha=1.5, beta=2.0),
        report("relu", accs30),
        report("aria2(alpha=0.5,beta=1)", accs30, alpha=0.5, beta=1.0),
        report("swish(beta=1)", accs30, beta=1.0),
        report("aria2(alpha=1.5,beta=1)", accs30, alpha=1.5, beta=1.0),
    ]
    write_sweep_csv(reports, out)
    header, rows = read_rows(out)
    assert header[-2:] == ["accuracy_epoch_10", "accuracy_epoch_25"]
    # relu first, then ascending (alpha, beta) with swish slotted at alpha=1
    assert [(r[0], r[1], r[2]) for r in rows] == [
        ("relu", "", ""),
        ("aria2", "0.5", "1.0"),
        ("swish", "", "1.0"),
        ("aria2", "1.5", "1.0"),
        ("aria2", "1.5", "2.0"),
    ]
    # checkpoint columns carry the accuracy at epochs 10 and 25
    assert rows[0][-2:] == [repr(accs30[9]), repr(accs30[24])]


def test_sweep_csv_failed_row(tmp_path):
    out = tmp_path / "sweep.csv"
    failed = RunReport(
        run_id="bad", activation="aria2(alpha=2,beta=1)", per_epoch=[],
        alpha=2.0, beta=1.0, status="failed",
    )
    write_sweep_csv([report("relu", [0.9]), failed], out)
    _, rows = read_rows(out)
    assert rows[1][:4] == ["aria2", "2.0", "1.0", "failed"]
    assert rows[1][4] == ""


def test_sweep_csv_reemission_is_byte_identical(tmp_path):
    reports = [report("relu", [0.5, 0.6]), report("swish(beta=1)", [0.4, 0.7], beta=1.0)]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_sweep_csv(reports, a)
    write_sweep_csv(reports, b)
    assert a.read_bytes() == b.read_bytes()


def test_sweep_csv_requires_reports(tmp_path):
    with pytest.raises(InvalidParamsError):
        write_sweep_csv([], tmp_path / "x.csv")


def test_report_csv(tmp_path):
    out = tmp_path / "run.csv"
    write_report_csv(report("relu", [0.5, 0.625], losses=[0.75, 0.5]), out)
    assert out.read_text() == (
        "epoch,train_loss,test_accuracy\n1,0.75,0.5\n2,0.5,0.625\n"
    )


def test_run_report_validation():
    with pytest.raises(InvalidParamsError):
        RunReport("x", "relu", [EpochMetrics(2, 0.5, 0.5)])
    with pytest.raises(InvalidParamsError):
        RunReport("x", "relu", [EpochMetrics(1, 0.5, 1.5)])
    with pytest.raises(InvalidParamsError):
        RunReport("x", "relu", [EpochMetrics(1, float("nan"), 0.5)])
