import gzip
import struct

import numpy as np
import pytest

from ariabench.data import (
    Dataset,
    load_mnist_idx,
    make_two_moons,
    split_train_test,
    subset,
    write_idx_images,
    write_idx_labels,
)
from ariabench.errors import (
    BadMagicError,
    CountMismatchError,
    InvalidParamsError,
    InvalidSizeError,
    LabelOutOfRangeError,
    TruncatedFileError,
)
from ariabench.rng import SplitMix64


def write_fixture(tmp_path, pixels, labels, gz=False):
    img = tmp_path / ("img.idx.gz" if gz else "img.idx")
    lbl = tmp_path / ("lbl.idx.gz" if gz else "lbl.idx")
    n, rows, cols = pixels.shape
    img_bytes = struct.pack(">4I", 0x803, n, rows, cols) + pixels.astype(np.uint8).tobytes()
    lbl_bytes = struct.pack(">2I", 0x801, n) + np.asarray(labels, np.uint8).tobytes()
    img.write_bytes(gzip.compress(img_bytes) if gz else img_bytes)
    lbl.write_bytes(gzip.compress(lbl_bytes) if gz else lbl_bytes)
    return img, lbl


def test_idx_fixture_parses_exactly(tmp_path):
    pixels = np.array(
        [[[0, 128], [255, 1]], [[7, 0], [0, 250]]], dtype=np.uint8
    )
    img, lbl = write_fixture(tmp_path, pixels, [3, 9])
    ds = load_mnist_idx(img, lbl)
    assert ds.images.shape == (2, 1, 2, 2)
    np.testing.assert_array_equal(ds.images, pixels.reshape(2, 1, 2, 2) / 255.0)
    np.testing.assert_array_equal(ds.labels, [3, 9])


def test_idx_gzip_transparent(tmp_path):
    pixels = np.arange(8, dtype=np.uint8).reshape(2, 2, 2)
    img, lbl = write_fixture(tmp_path, pixels, [0, 1], gz=True)
    ds = load_mnist_idx(img, lbl)
    np.testing.assert_array_equal(ds.images * 255.0, pixels.reshape(2, 1, 2, 2))


def test_idx_bad_magic(tmp_path):
    img, lbl = write_fixture(tmp_path, np.zeros((1, 2, 2), np.uint8), [0])
    good_img = img.read_bytes()
    img.write_bytes(struct.pack(">4I", 0x999, 1, 2, 2) + b"\x00" * 4)
    with pytest.raises(BadMagicError):
        load_mnist_idx(img, lbl)
    img.write_bytes(good_img)
    lbl.write_bytes(struct.pack(">2I", 0x999, 1) + b"\x00")
    with pytest.raises(BadMagicError):
        load_mnist_idx(img, lbl)


def test_idx_truncated(tmp_path):
    img, lbl = write_fixture(tmp_path, np.zeros((3, 2, 2), np.uint8), [0, 1, 2])
    img.write_bytes(img.read_bytes()[:-5])
    with pytest.raises(TruncatedFileError):
        load_mnist_idx(img, lbl)
    img2, lbl2 = write_fixture(tmp_path, np.zeros((3, 2, 2), np.uint8), [0, 1, 2])
    lbl2.write_bytes(lbl2.read_bytes()[:-1])
    with pytest.raises(TruncatedFileError):
        load_mnist_idx(img2, lbl2)


def test_idx_count_mismatch(tmp_path):
    img, lbl = write_fixture(tmp_path, np.zeros((2, 2, 2), np.uint8), [0, 1])
    lbl.write_bytes(struct.pack(">2I", 0x801, 3) + b"\x00\x01\x02")
    with pytest.raises(CountMismatchError):
        load_mnist_idx(img, lbl)


def test_idx_label_out_of_range(tmp_path):
    img, lbl = write_fixture(tmp_path, np.zeros((1, 2, 2), np.uint8), [10])
    with pytest.raises(LabelOutOfRangeError):
        load_mnist_idx(img, lbl)


def test_idx_round_trip(tmp_path):
    rng = SplitMix64(77)
    pixels = (rng.uniform((5, 4, 3)) * 256.0).astype(np.uint8)
    labels = (rng.uniform(5) * 10.0).astype(np.uint8)
    write_idx_images(tmp_path / "img.idx", pixels)
    write_idx_labels(tmp_path / "lbl.idx", labels)
    ds = load_mnist_idx(tmp_path / "img.idx", tmp_path / "lbl.idx")
    recovered = np.rint(ds.images * 255.0).astype(np.uint8).reshape(pixels.shape)
    np.testing.assert_array_equal(recovered, pixels)
    np.testing.assert_array_equal(ds.labels, labels)
    # byte-level round trip through the writers
    write_idx_images(tmp_path / "img2.idx", recovered)
    assert (tmp_path / "img.idx").read_bytes() == (tmp_path / "img2.idx").read_bytes()


def ten_class_dataset(n=200, seed=4):
    rng = SplitMix64(seed)
    images = rng.normal((n, 3))
    labels = (rng.uniform(n) * 10.0).astype(np.int64)
    labels[:10] = np.arange(10)  # every class represented
    return Dataset(images, labels)


def test_subset_stratification():
    ds = ten_class_dataset()
    sub = subset(ds, 10, seed=1)
    np.testing.assert_array_equal(np.sort(sub.labels), np.arange(10))
    sub37 = subset(ds, 37, seed=1)
    counts = np.bincount(sub37.labels, minlength=10)
    assert counts.max() - counts.min() <= 1
    assert counts.sum() == 37


def test_subset_full_size_is_permutation():
    ds = ten_class_dataset()
    sub = subset(ds, len(ds), seed=9)
    np.testing.assert_array_equal(
        np.sort(sub.images.sum(axis=1)), np.sort(ds.images.sum(axis=1))
    )
    np.testing.assert_array_equal(np.bincount(sub.labels), np.bincount(ds.labels))


def test_subset_deterministic():
    ds = ten_class_dataset()
    a = subset(ds, 50, seed=3)
    b = subset(ds, 50, seed=3)
    np.testing.assert_array_equal(a.images, b.images)
    np.testing.assert_array_equal(a.labels, b.labels)
    c = subset(ds, 50, seed=4)
    assert not np.array_equal(a.images, c.images)


def test_subset_short_supply_redistributes():
    labels = np.array([0] * 30 + [1] * 2, dtype=np.int64)
    ds = Dataset(np.zeros((32, 1)), labels)
    sub = subset(ds, 20, seed=0)
    counts = np.bincount(sub.labels, minlength=2)
    assert counts[1] == 2 and counts[0] == 18


def test_subset_invalid_size():
    ds = ten_class_dataset()
    with pytest.raises(InvalidSizeError):
        subset(ds, 0, seed=1)
    with pytest.raises(InvalidSizeError):
        subset(ds, len(ds) + 1, seed=1)


def test_two_moons_zero_noise_geometry():
    ds = make_two_moons(200, 0.0, seed=1)
    outer = ds.images[ds.labels == 0]
    inner = ds.images[ds.labels == 1]
    np.testing.assert_allclose(np.hypot(outer[:, 0], outer[:, 1]), 1.0, atol=1e-12)
    np.testing.assert_allclose(
        np.hypot(1.0 - inner[:, 0], 0.5 - inner[:, 1]), 1.0, atol=1e-12
    )


def test_two_moons_deterministic():
    a = make_two_moons(100, 0.2, seed=6)
    b = make_two_moons(100, 0.2, seed=6)
    np.testing.assert_array_equal(a.images, b.images)


def test_two_moons_validation():
    with pytest.raises(InvalidSizeError):
        make_two_moons(101, 0.1, seed=1)
    with pytest.raises(InvalidSizeError):
        make_two_moons(0, 0.1, seed=1)
    with pytest.raises(InvalidParamsError):
        make_two_moons(100, -0.1, seed=1)


def test_two_moons_knn_oracle():
    # leave-one-out 1-NN is the independent bound behind the training target
    ds = make_two_moons(1000, 0.1, seed=3)
    x, y = ds.images, ds.labels
    d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
    np.fill_diagonal(d2, np.inf)
    accuracy = float((y[d2.argmin(axis=1)] == y).mean())
    assert accuracy >= 0.99


def test_split_train_test_stratified_and_deterministic():
    ds = make_two_moons(1000, 0.1, seed=3)
    tr, te = split_train_test(ds, 0.25, seed=5)
    assert len(tr) == 750 and len(te) == 250
    np.testing.assert_array_equal(np.bincount(te.labels), [125, 125])
    tr2, te2 = split_train_test(ds, 0.25, seed=5)
    np.testing.assert_array_equal(te.images, te2.images)
    assert not np.intersect1d(
        tr.images.sum(axis=1).round(12), te.images.sum(axis=1).round(12)
    ).size


def test_dataset_validation():
    with pytest.raises(CountMismatchError):
        Dataset(np.zeros((3, 2)), np.zeros(2, dtype=np.int64))
    with pytest.raises(LabelOutOfRangeError):
        Dataset(np.zeros((2, 2)), np.array([-1, 0]))
