"""Paired-image datasets and per-position pixel series.

A paired dataset is N aligned (input, target) image pairs with identical
geometry.  Training views the data one position at a time: for position
``p`` the series ``x_p``/``t_p`` hold the N input/target values observed
there.  Position indices linearize (row, col, channel) in row-major,
channel-innermost order, which is also the model file layout.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptyDataset, IndexOutOfRange, InvalidFoldSpec, MissingCounterpart
from .image import Image, center_crop_resize, load_image, to_grayscale

_IMAGE_EXTENSIONS = (".pgm", ".ppm", ".png")

COLOR_MODES = ("grayscale", "per_channel")


@dataclass(frozen=True)
class PairedDataset:
    """N aligned (input, target) image pairs sharing one geometry.

    ``inputs`` and ``targets`` are read-only float64 arrays of shape
    ``(N, H, W, C)``; ``names`` keeps the pair order (lexicographic by
    matched filename when loaded from disk).
    """

    inputs: np.ndarray
    targets: np.ndarray
    names: tuple[str, ...]

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=np.float64)
        targets = np.asarray(self.targets, dtype=np.float64)
        if inputs.ndim != 4:
            raise ValueError(f"expected (N, H, W, C) arrays, got {inputs.shape}")
        if inputs.shape != targets.shape:
            raise ValueError(
                f"input/target shapes differ: {inputs.shape} vs {targets.shape}"
            )
        n, h, w, c = inputs.shape
        if n < 1:
            raise ValueError("dataset needs at least one pair")
        if c not in (1, 3):
            raise ValueError(f"channel count must be 1 or 3, got {c}")
        for label, arr in (("input", inputs), ("target", targets)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{label} intensities must be finite")
            if arr.min() < 0.0 or arr.max() > 1.0:
                raise ValueError(f"{label} intensities must lie in [0, 1]")
        names = tuple(self.names)
        if len(names) != n:
            raise ValueError(f"{len(names)} names for {n} pairs")
        inputs = inputs.copy(order="C")  # never freeze a caller-owned array
        targets = targets.copy(order="C")
        inputs.flags.writeable = False
        targets.flags.writeable = False
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "names", names)

    @classmethod
    def from_arrays(cls, inputs, targets, names=None) -> "PairedDataset":
        """Build a dataset from (N, H, W, C) or (N, H, W) arrays."""
        inputs = np.asarray(inputs, dtype=np.float64)
        targets = np.asarray(targets, dtype=np.float64)
        if inputs.ndim == 3:
            inputs = inputs[:, :, :, np.newaxis]
        if targets.ndim == 3:
            targets = targets[:, :, :, np.newaxis]
        if names is None:
            names = tuple(f"pair{i:05d}" for i in range(inputs.shape[0]))
        return cls(inputs, targets, tuple(names))

    @property
    def n_pairs(self) -> int:
        return self.inputs.shape[0]

    @property
    def geometry(self) -> tuple[int, int, int]:
        """(H, W, C) shared by every image in the dataset."""
        return self.inputs.shape[1:]

    @property
    def n_positions(self) -> int:
        h, w, c = self.geometry
        return h * w * c

    @property
    def flat_inputs(self) -> np.ndarray:
        """(N, H*W*C) view, row-major channel-innermost positions."""
        return self.inputs.reshape(self.n_pairs, -1)

    @property
    def flat_targets(self) -> np.ndarray:
        return self.targets.reshape(self.n_pairs, -1)

    def pair(self, i: int) -> tuple[Image, Image]:
        """The i-th (input, target) pair as Image values."""
        return Image(self.inputs[i]), Image(self.targets[i])

    def subset(self, indices) -> "PairedDataset":
        """New dataset restricted to ``indices`` (kept in the given order)."""
        idx = np.asarray(indices, dtype=np.int64)
        return PairedDataset(
            self.inputs[idx],
            self.targets[idx],
            tuple(self.names[i] for i in idx),
        )


@dataclass(frozen=True)
class PixelSeries:
    """The N input/target values observed at one pixel position."""

    position: int
    x: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        t = np.asarray(self.t, dtype=np.float64)
        if x.ndim != 1 or x.shape != t.shape:
            raise ValueError(f"series must be equal-length vectors, got {x.shape} vs {t.shape}")
        for label, arr in (("input", x), ("target", t)):
            if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0):
                raise ValueError(f"series {label} values must lie in [0, 1]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.x.shape[0]


def load_paired_dataset(
    input_dir,
    target_dir,
    size: tuple[int, int] = (128, 128),
    color_mode: str = "grayscale",
) -> PairedDataset:
    """Load matched image pairs from two directories.

    Every input file must have an identically named target file and vice
    versa ("a.pgm" pairs with "a.pgm").  Images are converted according to
    ``color_mode`` ("grayscale" collapses to luminance; "per_channel"
    keeps 3 channels, replicating grayscale sources) and then center-crop
    resized to ``size = (H, W)``.  Pair order is lexicographic by
    filename, so loading is fully deterministic.

    Raises
    ------
    MissingCounterpart
        A filename exists in one directory but not the other.
    EmptyDataset
        No image files found.
    """
    if color_mode not in COLOR_MODES:
        raise ValueError(f"color_mode must be one of {COLOR_MODES}, got {color_mode!r}")
    input_names = _scan_images(input_dir)
    target_names = _scan_images(target_dir)
    for name in sorted(input_names - target_names):
        raise MissingCounterpart(f"{name}: present in {input_dir}, missing in {target_dir}")
    for name in sorted(target_names - input_names):
        raise MissingCounterpart(f"{name}: present in {target_dir}, missing in {input_dir}")
    names = sorted(input_names)
    if not names:
        raise EmptyDataset(f"no image files in {input_dir} and {target_dir}")

    h, w = size
    inputs = []
    targets = []
    for name in names:
        inputs.append(_prepare(load_image(os.path.join(input_dir, name)), h, w, color_mode))
        targets.append(_prepare(load_image(os.path.join(target_dir, name)), h, w, color_mode))
    return PairedDataset(np.stack(inputs), np.stack(targets), tuple(names))


def _scan_images(directory) -> set[str]:
    return {
        entry
        for entry in os.listdir(directory)
        if entry.lower().endswith(_IMAGE_EXTENSIONS)
    }


def _prepare(img: Image, h: int, w: int, color_mode: str) -> np.ndarray:
    if color_mode == "grayscale":
        img = to_grayscale(img)
    elif img.channels == 1:
        img = Image(np.repeat(img.pixels, 3, axis=2))
    return center_crop_resize(img, h, w).pixels


def pixel_series(ds: PairedDataset, p: int) -> PixelSeries:
    """The input/target value vectors at position ``p`` across all pairs."""
    if not 0 <= p < ds.n_positions:
        raise IndexOutOfRange(f"position {p} outside [0, {ds.n_positions})")
    return PixelSeries(p, ds.flat_inputs[:, p].copy(), ds.flat_targets[:, p].copy())


def kfold_split(
    ds: PairedDataset, k: int, fold: int, seed: int
) -> tuple[PairedDataset, PairedDataset]:
    """Deterministic (train, validation) split for fold ``fold`` of ``k``.

    Pairs are shuffled once by ``seed`` and assigned to folds as
    contiguous runs of the shuffled order; fold sizes differ by at most
    one.  Both returned datasets keep ascending original pair order.
    """
    n = ds.n_pairs
    if not 2 <= k <= n:
        raise InvalidFoldSpec(f"fold count must satisfy 2 <= k <= {n}, got {k}")
    if not 0 <= fold < k:
        raise InvalidFoldSpec(f"fold index must satisfy 0 <= fold < {k}, got {fold}")
    perm = np.random.default_rng(seed).permutation(n)
    base, remainder = divmod(n, k)
    sizes = [base + (1 if i < remainder else 0) for i in range(k)]
    start = sum(sizes[:fold])
    stop = start + sizes[fold]
    val_idx = np.sort(perm[start:stop])
    train_idx = np.sort(np.concatenate([perm[:start], perm[stop:]]))
    return ds.subset(train_idx), ds.subset(val_idx)
