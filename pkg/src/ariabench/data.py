"""Dataset acquisition: MNIST IDX files, synthetic two-moons, subsetting.

IDX parsing follows the standard MNIST distribution byte-exactly: big-endian
headers, magic 0x803 for images (then n, rows, cols and raw pixel bytes) and
0x801 for labels. Gzipped files are detected by their magic bytes and
decompressed transparently.
"""

from __future__ import annotations

import gzip
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadMagicError,
    CountMismatchError,
    InvalidParamsError,
    InvalidSizeError,
    LabelOutOfRangeError,
    TruncatedFileError,
)
from .rng import SplitMix64

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


@dataclass
class Dataset:
    images: np.ndarray  # (n, features) or (n, c, h, w), float64 in [0, 1]
    labels: np.ndarray  # (n,) integer class indices
    split_name: str = ""

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.images.shape[0] != self.labels.shape[0]:
            raise CountMismatchError(
                f"{self.images.shape[0]} images vs {self.labels.shape[0]} labels"
            )
        if self.labels.size and self.labels.min() < 0:
            raise LabelOutOfRangeError("labels must be nonnegative")

    def __len__(self) -> int:
        return self.images.shape[0]

    def take(self, indices: np.ndarray, split_name: str | None = None) -> "Dataset":
        return Dataset(
            self.images[indices],
            self.labels[indices],
            self.split_name if split_name is None else split_name,
        )


def _read_bytes(path) -> bytes:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        return gzip.decompress(raw)
    return raw


def _header(data: bytes, path, words: int) -> tuple[int, ...]:
    need = 4 * words
    if len(data) < need:
        raise TruncatedFileError(f"{path}: header needs {need} bytes, file has {len(data)}")
    return struct.unpack(f">{words}I", data[:need])


def load_mnist_idx(images_path, labels_path) -> Dataset:
    """Parse an IDX image/label file pair into (n, 1, rows, cols) float images
    scaled by 1/255 and integer labels."""
    img_data = _read_bytes(images_path)
    magic, n, rows, cols = _header(img_data, images_path, 4)
    if magic != IMAGE_MAGIC:
        raise BadMagicError(f"{images_path}: magic {magic:#010x}, expected {IMAGE_MAGIC:#010x}")
    payload = n * rows * cols
    if len(img_data) < 16 + payload:
        raise TruncatedFileError(
            f"{images_path}: expected {16 + payload} bytes, file has {len(img_data)}"
        )
    pixels = np.frombuffer(img_data, dtype=np.uint8, count=payload, offset=16)

    lbl_data = _read_bytes(labels_path)
    lbl_magic, lbl_n = _header(lbl_data, labels_path, 2)
    if lbl_magic != LABEL_MAGIC:
        raise BadMagicError(f"{labels_path}: magic {lbl_magic:#010x}, expected {LABEL_MAGIC:#010x}")
    if len(lbl_data) < 8 + lbl_n:
        raise TruncatedFileError(
            f"{labels_path}: expected {8 + lbl_n} bytes, file has {len(lbl_data)}"
        )
    if lbl_n != n:
        raise CountMismatchError(f"{n} images vs {lbl_n} labels")
    labels = np.frombuffer(lbl_data, dtype=np.uint8, count=lbl_n, offset=8)
    if labels.size and labels.max() > 9:
        raise LabelOutOfRangeError(f"{labels_path}: label {labels.max()} > 9")

    images = pixels.reshape(n, 1, rows, cols).astype(np.float64) / 255.0
    return Dataset(images, labels.astype(np.int64), split_name=str(images_path))


def write_idx_images(path, images: np.ndarray) -> None:
    """Write (n, rows, cols) uint8 pixel data as an IDX image file."""
    images = np.ascontiguousarray(images, dtype=np.uint8)
    n, rows, cols = images.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack(">4I", IMAGE_MAGIC, n, rows, cols))
        fh.write(images.tobytes())


def write_idx_labels(path, labels: np.ndarray) -> None:
    """Write integer labels as an IDX label file."""
    labels = np.ascontiguousarray(labels, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack(">2I", LABEL_MAGIC, labels.shape[0]))
        fh.write(labels.tobytes())


def _stratified_counts(labels: np.ndarray, n: int) -> dict[int, int]:
    """Per-class sample counts: within 1 of n/classes wherever supply allows."""
    classes, supply = np.unique(labels, return_counts=True)
    supply = dict(zip(classes.tolist(), supply.tolist()))
    base, rem = divmod(n, len(classes))
    counts = {}
    for i, c in enumerate(classes.tolist()):
        counts[c] = min(base + (1 if i < rem else 0), supply[c])
    deficit = n - sum(counts.values())
    while deficit > 0:
        progressed = False
        for c in classes.tolist():
            if deficit > 0 and counts[c] < supply[c]:
                counts[c] += 1
                deficit -= 1
                progressed = True
        if not progressed:  # cannot happen while n <= len(labels)
            raise InvalidSizeError("not enough samples to satisfy the request")
    return counts


def subset(d: Dataset, n: int, seed: int) -> Dataset:
    """Deterministic stratified-by-label sample of size n."""
    if not (1 <= n <= len(d)):
        raise InvalidSizeError(f"subset size {n} outside [1, {len(d)}]")
    rng = SplitMix64(seed)
    counts = _stratified_counts(d.labels, n)
    picked: list[np.ndarray] = []
    for c in sorted(counts):
        idx = np.flatnonzero(d.labels == c)
        rng.shuffle(idx)
        picked.append(idx[: counts[c]])
    order = np.concatenate(picked)
    rng.shuffle(order)
    return d.take(order)


def make_two_moons(n: int, noise: float, seed: int) -> Dataset:
    """Two interleaved half-circles with Gaussian jitter of the given sigma.

    Class 0 sits on the unit upper half-circle; class 1 on the lower
    half-circle shifted to (1, 0.5).
    """
    if n < 2 or n % 2 != 0:
        raise InvalidSizeError(f"n must be even and >= 2, got {n}")
    if noise < 0 or not math.isfinite(noise):
        raise InvalidParamsError(f"noise must be >= 0, got {noise}")
    half = n // 2
    theta = np.linspace(0.0, math.pi, half)
    outer = np.column_stack([np.cos(theta), np.sin(theta)])
    inner = np.column_stack([1.0 - np.cos(theta), 0.5 - np.sin(theta)])
    points = np.vstack([outer, inner])
    if noise > 0:
        points = points + noise * SplitMix64(seed).normal((n, 2))
    labels = np.concatenate([np.zeros(half, dtype=np.int64), np.ones(half, dtype=np.int64)])
    return Dataset(points, labels, split_name="two_moons")


def split_train_test(d: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic stratified train/test split."""
    if not (0.0 < test_fraction < 1.0):
        raise InvalidParamsError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = SplitMix64(seed)
    test_parts, train_parts = [], []
    for c in np.unique(d.labels):
        idx = np.flatnonzero(d.labels == c)
        rng.shuffle(idx)
        cut = int(round(test_fraction * len(idx)))
        test_parts.append(idx[:cut])
        train_parts.append(idx[cut:])
    test_idx = np.concatenate(test_parts)
    train_idx = np.concatenate(train_parts)
    rng.shuffle(test_idx)
    rng.shuffle(train_idx)
    return d.take(train_idx, "train"), d.take(test_idx, "test")
