"""Procedural paired datasets with known per-pixel ground truth.

Every position ``p`` gets a hidden affine map ``t = gain(p) * x + offset(p)``
drawn from smooth random fields, plus Gaussian observation noise.  Input
values are sampled inside the band that keeps the noisy target inside
[0, 1] (5 noise standard deviations of margin), so the affine ground
truth is exact rather than clipped.  Everything is deterministic given
the seed.
"""

from __future__ import annotations

import numpy as np

from .dataset import PairedDataset
from .image import _resize_bilinear

GAIN_RANGE = (0.5, 1.5)
OFFSET_RANGE = (-0.2, 0.2)


def smooth_field(height: int, width: int, lo: float, hi: float,
                 rng: np.random.Generator, knots: int = 5) -> np.ndarray:
    """Random smooth field in [lo, hi]: coarse uniform grid, bilinearly upsampled."""
    coarse = rng.uniform(0.0, 1.0, size=(knots, knots, 1))
    fine = _resize_bilinear(coarse, height, width)[:, :, 0]
    return lo + (hi - lo) * fine


def affine_ground_truth(height: int, width: int, seed: int,
                        knots: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """Per-position (gain, offset) fields for a synthetic mapping task."""
    rng = np.random.default_rng(seed)
    gain = smooth_field(height, width, *GAIN_RANGE, rng, knots)
    offset = smooth_field(height, width, *OFFSET_RANGE, rng, knots)
    return gain, offset


def synthetic_affine_pairs(
    n_pairs: int,
    gain: np.ndarray,
    offset: np.ndarray,
    noise_sd: float,
    rng: np.random.Generator,
) -> PairedDataset:
    """Draw ``n_pairs`` (input, noisy target) single-channel image pairs.

    Inputs are uniform per pixel inside the band where the noiseless
    target keeps a 5 * noise_sd margin from both intensity bounds.
    """
    h, w = gain.shape
    margin = 5.0 * noise_sd
    lo = np.clip((margin - offset) / gain, 0.0, 1.0)
    hi = np.clip((1.0 - margin - offset) / gain, 0.0, 1.0)
    if np.any(hi <= lo):
        raise ValueError("no feasible input band; shrink noise_sd or field ranges")
    u = rng.uniform(0.0, 1.0, size=(n_pairs, h, w))
    inputs = lo + (hi - lo) * u
    noise = rng.normal(0.0, noise_sd, size=(n_pairs, h, w)) if noise_sd > 0 else 0.0
    targets = np.clip(gain * inputs + offset + noise, 0.0, 1.0)
    return PairedDataset.from_arrays(inputs, targets)


def make_affine_benchmark(
    n_train: int,
    n_test: int,
    height: int = 64,
    width: int = 64,
    noise_sd: float = 0.01,
    seed: int = 7,
) -> tuple[PairedDataset, PairedDataset, np.ndarray, np.ndarray]:
    """Train/test datasets over one shared hidden affine field.

    Returns (train, test, gain, offset).
    """
    gain, offset = affine_ground_truth(height, width, seed)
    rng = np.random.default_rng(seed + 1)
    train = synthetic_affine_pairs(n_train, gain, offset, noise_sd, rng)
    test = synthetic_affine_pairs(n_test, gain, offset, noise_sd, rng)
    return train, test, gain, offset
