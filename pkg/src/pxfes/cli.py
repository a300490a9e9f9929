"""Command-line front end: train / apply / eval / cv / inspect / montage.

Every command prints a single machine-readable ``key=value`` summary line
to stdout on success (always containing ``status=ok``) and exits 0.
Usage errors exit 2, runtime errors print to stderr and exit 1.  All file
outputs are written atomically.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .dataset import load_paired_dataset
from .errors import PxfesError
from .evaluation import (
    DEFAULT_LAMBDA_GRID,
    DEFAULT_SIGMA_GRID,
    apply_model,
    cross_validate,
    evaluate_pairs,
    montage,
    parameter_count,
    stored_value_count,
    write_cv_report,
    write_eval_report,
)
from .image import Image, center_crop_resize, load_image, save_image, to_grayscale
from .kernel import PixelKRModel, train_pixel_kr
from .linear import train_full_rr, train_pixel_rr
from .model_io import load_model, model_kind, kind_name, save_model

DEFAULT_GEOMETRY = (128, 128)
DEFAULT_LAMBDA = 0.4
DEFAULT_SIGMA = 3.0
DEFAULT_FOLDS = 5
DEFAULT_SEED = 7

_METHODS = {"pixel-rr": "pixel_rr", "pixel-kr": "pixel_kr", "full-rr": "full_rr"}
_COLOR_MODES = {"gray": "grayscale", "per-channel": "per_channel"}


def _geometry(text: str) -> tuple[int, int]:
    try:
        h_str, w_str = text.lower().split("x")
        h, w = int(h_str), int(w_str)
    except ValueError:
        raise argparse.ArgumentTypeError(f"geometry must look like 128x128, got {text!r}")
    if h < 1 or w < 1:
        raise argparse.ArgumentTypeError(f"geometry must be positive, got {text!r}")
    return h, w


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _float_grid(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("grid must not be empty")
    return values


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return format(value, ".12g")
    return str(value)


def _summary(command: str, **pairs) -> str:
    parts = [f"status=ok", f"command={command}"]
    parts += [f"{key}={_fmt(value)}" for key, value in pairs.items()]
    return " ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pxfes",
        description="Per-pixel regression for paired image-to-image mapping.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fit a model on a paired dataset")
    train.add_argument("--method", choices=sorted(_METHODS), required=True)
    train.add_argument("--data", required=True, help="dataset root with input/ and target/")
    train.add_argument("--out", required=True, help="model file to write")
    train.add_argument("--lambda", dest="lam", type=_positive_float, default=DEFAULT_LAMBDA)
    train.add_argument("--sigma", type=_positive_float, default=DEFAULT_SIGMA)
    train.add_argument("--geometry", type=_geometry, default=DEFAULT_GEOMETRY)
    train.add_argument("--color-mode", choices=sorted(_COLOR_MODES), default="gray")
    train.set_defaults(func=_cmd_train)

    apply_p = sub.add_parser("apply", help="run a model on one image")
    apply_p.add_argument("--model", required=True)
    apply_p.add_argument("--in", dest="in_path", required=True)
    apply_p.add_argument("--out", required=True)
    apply_p.set_defaults(func=_cmd_apply)

    eval_p = sub.add_parser("eval", help="score a model on a paired dataset")
    eval_p.add_argument("--model", required=True)
    eval_p.add_argument("--data", required=True)
    eval_p.add_argument("--report", help="optional CSV output path")
    eval_p.set_defaults(func=_cmd_eval)

    cv = sub.add_parser("cv", help="cross-validate hyperparameters")
    cv.add_argument("--method", choices=["pixel-rr", "pixel-kr"], required=True)
    cv.add_argument("--data", required=True)
    cv.add_argument("--lambda-grid", type=_float_grid, default=DEFAULT_LAMBDA_GRID)
    cv.add_argument("--sigma-grid", type=_float_grid, default=DEFAULT_SIGMA_GRID)
    cv.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    cv.add_argument("--seed", type=int, default=DEFAULT_SEED)
    cv.add_argument("--geometry", type=_geometry, default=DEFAULT_GEOMETRY)
    cv.add_argument("--color-mode", choices=sorted(_COLOR_MODES), default="gray")
    cv.add_argument("--report", help="optional CSV output path")
    cv.set_defaults(func=_cmd_cv)

    inspect = sub.add_parser("inspect", help="describe a model file")
    inspect.add_argument("model", help="model file to describe")
    inspect.set_defaults(func=_cmd_inspect)

    montage_p = sub.add_parser("montage", help="tile images into a comparison grid")
    montage_p.add_argument("images", nargs="+", help="tile images, row-major")
    montage_p.add_argument("--out", required=True)
    montage_p.add_argument("--cols", type=int, default=0, help="tiles per row (default: all)")
    montage_p.add_argument("--gap", type=int, default=4)
    montage_p.add_argument("--gap-value", type=float, default=1.0)
    montage_p.set_defaults(func=_cmd_montage)

    return parser


def _load_dataset_for(args):
    root = args.data
    return load_paired_dataset(
        os.path.join(root, "input"),
        os.path.join(root, "target"),
        size=args.geometry,
        color_mode=_COLOR_MODES[args.color_mode],
    )


def _cmd_train(args):
    method = _METHODS[args.method]
    ds = _load_dataset_for(args)
    if method == "pixel_rr":
        model = train_pixel_rr(ds, args.lam)
    elif method == "pixel_kr":
        model = train_pixel_kr(ds, args.lam, args.sigma)
    else:
        model = train_full_rr(ds, args.lam)
    save_model(model, args.out)
    h, w, c = model.geometry
    info = dict(
        method=method,
        n_pairs=ds.n_pairs,
        geometry=f"{h}x{w}x{c}",
        **{"lambda": args.lam},
    )
    if method == "pixel_kr":
        info["sigma"] = args.sigma
    info["params"] = parameter_count(model)
    info["model"] = args.out
    return _summary("train", **info)


def _prepare_for_model(img, model):
    h, w, c = model.geometry
    if c == 1:
        img = to_grayscale(img)
    elif img.channels == 1:
        img = Image(np.repeat(img.pixels, 3, axis=2))
    return center_crop_resize(img, h, w)


def _cmd_apply(args):
    model = load_model(args.model)
    img = _prepare_for_model(load_image(args.in_path), model)
    out = apply_model(model, img)
    save_image(out, args.out)
    return _summary("apply", model=args.model, **{"in": args.in_path, "out": args.out})


def _cmd_eval(args):
    model = load_model(args.model)
    h, w, c = model.geometry
    ds = load_paired_dataset(
        os.path.join(args.data, "input"),
        os.path.join(args.data, "target"),
        size=(h, w),
        color_mode="grayscale" if c == 1 else "per_channel",
    )
    report = evaluate_pairs(model, ds)
    info = dict(
        model=args.model,
        n_pairs=report.n_pairs,
        mean_mse=report.mean_mse,
        mean_psnr=report.mean_psnr,
    )
    if args.report:
        kind = kind_name(model_kind(model))
        sigma = model.sigma if isinstance(model, PixelKRModel) else None
        write_eval_report(report, args.report, kind, model.lam, sigma)
        info["report"] = args.report
    return _summary("eval", **info)


def _cmd_cv(args):
    method = _METHODS[args.method]
    ds = _load_dataset_for(args)
    result = cross_validate(
        ds,
        method,
        lambda_grid=args.lambda_grid,
        sigma_grid=args.sigma_grid if method == "pixel_kr" else None,
        k=args.folds,
        seed=args.seed,
    )
    best_lam, best_sigma = result.best
    info = dict(method=method, folds=args.folds, seed=args.seed,
                candidates=len(result.grid), best_lambda=best_lam)
    if best_sigma is not None:
        info["best_sigma"] = best_sigma
    info["best_mse"] = float(result.mean_scores[result.best_index])
    if args.report:
        write_cv_report(result, args.report)
        info["report"] = args.report
    return _summary("cv", **info)


def _cmd_inspect(args):
    model = load_model(args.model)
    h, w, c = model.geometry
    info = dict(
        model=args.model,
        kind=kind_name(model_kind(model)),
        geometry=f"{h}x{w}x{c}",
        **{"lambda": model.lam},
    )
    if isinstance(model, PixelKRModel):
        info["sigma"] = model.sigma
        info["n_train"] = model.n_train
    info["params"] = parameter_count(model)
    info["stored_values"] = stored_value_count(model)
    return _summary("inspect", **info)


def _cmd_montage(args):
    images = [load_image(path) for path in args.images]
    cols = args.cols if args.cols > 0 else len(images)
    if len(images) % cols != 0:
        raise PxfesError(
            f"{len(images)} images do not fill a grid with {cols} columns"
        )
    rows = [images[i:i + cols] for i in range(0, len(images), cols)]
    grid = montage(rows, gap=args.gap, gap_value=args.gap_value)
    save_image(grid, args.out)
    return _summary(
        "montage", rows=len(rows), cols=cols,
        out=args.out, size=f"{grid.height}x{grid.width}",
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        line = args.func(args)
    except (PxfesError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(line)
    return 0


def entry_point() -> None:
    raise SystemExit(main())
