"""pxfes: per-pixel regression for paired image-to-image mapping.

Learns, per pixel position, a scalar affine map (ridge regression) or a
one-dimensional Gaussian kernel ridge regressor from paired example
images, so every output pixel observes exactly one input pixel.  A dense
whole-image ridge map is included as a desk-scale baseline.
"""

from .dataset import (
    PairedDataset,
    PixelSeries,
    kfold_split,
    load_paired_dataset,
    pixel_series,
)
from .errors import (
    BadMagic,
    CorruptHeader,
    DimensionTooLarge,
    EmptyDataset,
    GeometryMismatch,
    IndexOutOfRange,
    InvalidBandwidth,
    InvalidFoldSpec,
    IoFailure,
    MissingCounterpart,
    ModelFormatError,
    PxfesError,
    RaggedGrid,
    SingularSystem,
    SolveFailure,
    TruncatedPayload,
    UnknownModelKind,
    UnsupportedFormat,
    UnsupportedVersion,
)
from .evaluation import (
    CvResult,
    DEFAULT_LAMBDA_GRID,
    DEFAULT_SIGMA_GRID,
    EvalReport,
    apply_model,
    cross_validate,
    evaluate_pairs,
    montage,
    mse,
    parameter_count,
    psnr,
    stored_value_count,
    write_cv_report,
    write_eval_report,
)
from .image import Image, center_crop_resize, load_image, save_image, to_grayscale
from .kernel import (
    PixelKRModel,
    apply_pixel_kr,
    fit_kernel_series,
    gaussian_kernel,
    kernel_matrix,
    pixel_kr_objective,
    predict_pixel_kr,
    train_pixel_kr,
)
from .linear import (
    FullRRModel,
    PixelRRModel,
    apply_full_rr,
    apply_pixel_rr,
    fit_pixel_series,
    pixel_rr_objective,
    train_full_rr,
    train_pixel_rr,
)
from .model_io import load_model, save_model

__version__ = "0.1.0"

# Shipped hyperparameter defaults: ridge strength for both per-pixel
# trainers, and kernel bandwidths per mapping style (narrow for
# neutral-to-happy mappings, wide for other expression mappings).
DEFAULT_LAMBDA = 0.4
SIGMA_NEUTRAL_TO_HAPPY = 3.0
SIGMA_OTHER_EXPRESSIONS = 10.0

__all__ = [
    "Image",
    "PairedDataset",
    "PixelSeries",
    "PixelRRModel",
    "PixelKRModel",
    "FullRRModel",
    "CvResult",
    "EvalReport",
    "load_image",
    "save_image",
    "to_grayscale",
    "center_crop_resize",
    "load_paired_dataset",
    "pixel_series",
    "kfold_split",
    "train_pixel_rr",
    "apply_pixel_rr",
    "fit_pixel_series",
    "pixel_rr_objective",
    "train_full_rr",
    "apply_full_rr",
    "gaussian_kernel",
    "kernel_matrix",
    "train_pixel_kr",
    "predict_pixel_kr",
    "apply_pixel_kr",
    "fit_kernel_series",
    "pixel_kr_objective",
    "mse",
    "psnr",
    "parameter_count",
    "stored_value_count",
    "apply_model",
    "evaluate_pairs",
    "cross_validate",
    "montage",
    "write_cv_report",
    "write_eval_report",
    "save_model",
    "load_model",
    "DEFAULT_LAMBDA",
    "DEFAULT_LAMBDA_GRID",
    "DEFAULT_SIGMA_GRID",
    "SIGMA_NEUTRAL_TO_HAPPY",
    "SIGMA_OTHER_EXPRESSIONS",
    "PxfesError",
    "UnsupportedFormat",
    "CorruptHeader",
    "IoFailure",
    "MissingCounterpart",
    "EmptyDataset",
    "InvalidFoldSpec",
    "IndexOutOfRange",
    "GeometryMismatch",
    "SingularSystem",
    "DimensionTooLarge",
    "InvalidBandwidth",
    "SolveFailure",
    "RaggedGrid",
    "ModelFormatError",
    "BadMagic",
    "UnsupportedVersion",
    "UnknownModelKind",
    "TruncatedPayload",
]
