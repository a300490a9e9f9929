#!/usr/bin/env python3
"""Assemble a qualitative comparison grid: input / target / both models.

Rows are test pairs; columns are input, ground-truth target, the affine
model's output, and the kernel model's output.  The montage is written as
a plain PGM you can open anywhere.
"""

import os

from pxfes import (
    apply_pixel_kr,
    apply_pixel_rr,
    montage,
    mse,
    save_image,
    train_pixel_kr,
    train_pixel_rr,
)
from pxfes.synthetic import make_affine_benchmark

train, test, _, _ = make_affine_benchmark(
    n_train=150, n_test=3, height=48, width=48, noise_sd=0.01, seed=41
)

affine = train_pixel_rr(train, 0.01)
kernel = train_pixel_kr(train, 0.01, 0.5)

rows = []
for i in range(test.n_pairs):
    inp, tgt = test.pair(i)
    row = [inp, tgt, apply_pixel_rr(affine, inp), apply_pixel_kr(kernel, inp)]
    rows.append(row)
    print(f"pair {i}: affine MSE {mse(row[2], tgt):.2e}, "
          f"kernel MSE {mse(row[3], tgt):.2e}")

grid = montage(rows, gap=4, gap_value=1.0)
os.makedirs("demo_output", exist_ok=True)
path = os.path.join("demo_output", "comparison.pgm")
save_image(grid, path)
print(f"\ncolumns: input | target | affine output | kernel output")
print(f"{grid.height}x{grid.width} montage written to {path}")
