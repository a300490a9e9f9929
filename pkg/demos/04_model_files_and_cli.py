#!/usr/bin/env python3
"""Drive the command-line interface end to end on a tiny on-disk dataset.

Shows the dataset directory convention (<root>/input, <root>/target,
matched filenames), the compact .pxf model file round trip, and the
single-line key=value summaries every command prints.
"""

import os
import subprocess
import sys

import numpy as np

from pxfes import Image, load_model, save_image

ROOT = os.path.join("demo_output", "cli")
DS = os.path.join(ROOT, "ds")


def run(*args):
    cmd = [sys.executable, "-m", "pxfes", *args]
    print(f"$ pxfes {' '.join(args)}")
    proc = subprocess.run(cmd, capture_output=True, text=True)
    print("  " + (proc.stdout.strip() or proc.stderr.strip()))
    proc.check_returncode()
    return proc.stdout


# --- build a small paired dataset on disk ---------------------------------
rng = np.random.default_rng(5)
os.makedirs(os.path.join(DS, "input"), exist_ok=True)
os.makedirs(os.path.join(DS, "target"), exist_ok=True)
for i in range(10):
    x = rng.uniform(0.05, 0.95, (24, 24))
    t = np.clip(0.8 * x + 0.1, 0, 1)
    save_image(Image(x), os.path.join(DS, "input", f"s{i:02d}.pgm"))
    save_image(Image(t), os.path.join(DS, "target", f"s{i:02d}.pgm"))
print(f"wrote 10 pairs under {DS}/{{input,target}}\n")

model_path = os.path.join(ROOT, "model.pxf")
probe = os.path.join(DS, "input", "s00.pgm")
output = os.path.join(ROOT, "mapped.pgm")

# --- the full command tour -------------------------------------------------
run("train", "--method", "pixel-rr", "--data", DS,
    "--geometry", "24x24", "--lambda", "0.05", "--out", model_path)
run("inspect", model_path)
run("apply", "--model", model_path, "--in", probe, "--out", output)
run("eval", "--model", model_path, "--data", DS,
    "--report", os.path.join(ROOT, "eval.csv"))
run("montage", probe, output, "--out", os.path.join(ROOT, "side_by_side.pgm"),
    "--gap", "3")

# --- the model file is a plain little-endian record ------------------------
model = load_model(model_path)
size = os.path.getsize(model_path)
print(f"\n{model_path}: {size} bytes for {model.weights.size} weights "
      f"+ {model.biases.size} biases (f64) and a 21-byte header")
print(f"learned weights span [{model.weights.min():.3f}, {model.weights.max():.3f}] "
      f"(true slope 0.8, pulled down a little by the ridge penalty)")
