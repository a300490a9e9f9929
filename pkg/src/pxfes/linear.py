"""Closed-form per-pixel ridge regression and the dense full-image baseline.

The per-pixel model gives every position ``p`` its own scalar affine map
``y = w_p * x + b_p`` fitted by ridge regression over the N training
values observed at that position:

    E(w_p, b_p) = 1/2 * ||w_p x_p + b_p 1 - t_p||^2 + lam/2 * (w_p^2 + b_p^2)

Setting both partial derivatives to zero yields, per position, the
symmetric 2x2 normal equations

    [ Sxx + lam   Sx      ] [w_p]   [Sxt]
    [ Sx          N + lam ] [b_p] = [St ]

with Sxx = x.x, Sx = sum(x), Sxt = x.t, St = sum(t).  The bias is
regularized exactly as written in the objective.  The solve uses the
explicit 2x2 adjugate, is vectorized over positions, and is therefore
independent of pixel iteration order.

The full baseline fits one dense matrix ``W`` minimizing
``1/2 ||W X^T - T^T||_F^2 + lam/2 ||W||_F^2`` (no bias term) over
vectorized whole images; it exists as a desk-scale reference point, not a
production path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .dataset import PairedDataset, PixelSeries
from .errors import DimensionTooLarge, GeometryMismatch, SingularSystem
from .image import Image

# Dense full-image solve guard: D^2 weights at f64 stay under ~128 MiB.
MAX_FULL_RR_DIMENSION = 4096

# Relative determinant floor below which the 2x2 system counts as singular.
_DET_FLOOR = 1e-12


@dataclass(frozen=True)
class PixelRRModel:
    """Per-position affine maps: one (weight, bias) pair per pixel position.

    ``weights`` and ``biases`` are flat arrays over the H*W*C positions in
    row-major, channel-innermost order.  Parameter count is 2*H*W*C.
    """

    geometry: tuple[int, int, int]
    weights: np.ndarray
    biases: np.ndarray
    lam: float

    def __post_init__(self):
        h, w, c = self.geometry
        n_pos = h * w * c
        weights = np.asarray(self.weights, dtype=np.float64)
        biases = np.asarray(self.biases, dtype=np.float64)
        if weights.shape != (n_pos,) or biases.shape != (n_pos,):
            raise ValueError(
                f"need {n_pos} weights and biases, got {weights.shape} and {biases.shape}"
            )
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(biases))):
            raise ValueError("model parameters must be finite")
        weights = weights.copy()
        biases = biases.copy()
        weights.flags.writeable = False
        biases.flags.writeable = False
        object.__setattr__(self, "geometry", (int(h), int(w), int(c)))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)
        object.__setattr__(self, "lam", float(self.lam))


@dataclass(frozen=True)
class FullRRModel:
    """Dense whole-image linear map: matrix of shape (H*W*C, H*W*C)."""

    geometry: tuple[int, int, int]
    matrix: np.ndarray
    lam: float

    def __post_init__(self):
        h, w, c = self.geometry
        n_pos = h * w * c
        matrix = np.asarray(self.matrix, dtype=np.float64)
        if matrix.shape != (n_pos, n_pos):
            raise ValueError(f"need a {n_pos}x{n_pos} matrix, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("model parameters must be finite")
        matrix = matrix.copy(order="C")
        matrix.flags.writeable = False
        object.__setattr__(self, "geometry", (int(h), int(w), int(c)))
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "lam", float(self.lam))


def _solve_affine_normal_eq(sxx, sx, sxt, st, n, lam):
    """Adjugate solve of the per-position 2x2 normal equations.

    Works elementwise on arrays, so training is order-independent by
    construction.  Raises SingularSystem when any determinant falls below
    the relative floor (reachable only with lam == 0).
    """
    a = sxx + lam
    d = n + lam
    det = a * d - sx * sx
    floor = _DET_FLOOR * np.maximum(1.0, a * d)
    bad = det <= floor
    if np.any(bad):
        raise SingularSystem(
            "per-pixel normal equations are singular "
            "(constant pixel series with lam == 0)"
        )
    w = (d * sxt - sx * st) / det
    b = (a * st - sx * sxt) / det
    return w, b


def train_pixel_rr(ds: PairedDataset, lam: float) -> PixelRRModel:
    """Fit one (weight, bias) pair per pixel position in closed form.

    ``lam`` must be strictly positive: that keeps every per-position
    system nonsingular regardless of the data (face datasets contain
    constant background pixels).  Use :func:`fit_pixel_series` for
    analytic lam == 0 experiments.
    """
    if lam <= 0:
        raise ValueError(f"lam must be > 0 for training, got {lam}")
    x = ds.flat_inputs
    t = ds.flat_targets
    n = ds.n_pairs
    sxx = np.einsum("np,np->p", x, x)
    sx = x.sum(axis=0)
    sxt = np.einsum("np,np->p", x, t)
    st = t.sum(axis=0)
    w, b = _solve_affine_normal_eq(sxx, sx, sxt, st, float(n), float(lam))
    return PixelRRModel(ds.geometry, w, b, lam)


def fit_pixel_series(x, t, lam: float) -> tuple[float, float]:
    """Solve one position's normal equations directly (lam >= 0 allowed).

    This is the analytic entry point used for lam == 0 experiments; the
    public trainer enforces lam > 0.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    x = np.asarray(x, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    w, b = _solve_affine_normal_eq(
        float(x @ x), float(x.sum()), float(x @ t), float(t.sum()),
        float(x.shape[0]), float(lam),
    )
    return float(w), float(b)


def apply_pixel_rr(model: PixelRRModel, img: Image) -> Image:
    """Map every pixel through its own affine map, clamped to [0, 1].

    Output position ``p`` depends on input position ``p`` only.
    """
    if img.geometry != model.geometry:
        raise GeometryMismatch(
            f"image geometry {img.geometry} != model geometry {model.geometry}"
        )
    out = model.weights * img.flat() + model.biases
    return Image(np.clip(out, 0.0, 1.0).reshape(model.geometry))


def pixel_rr_objective(w: float, b: float, series: PixelSeries, lam: float) -> float:
    """Ridge objective for one position: 1/2 ||w x + b - t||^2 + lam/2 (w^2 + b^2)."""
    r = w * series.x + b - series.t
    return float(0.5 * (r @ r) + 0.5 * lam * (w * w + b * b))


def train_full_rr(ds: PairedDataset, lam: float) -> FullRRModel:
    """Fit the dense whole-image ridge map W = [(X^T X + lam I)^-1 X^T T]^T.

    Rows of X/T are vectorized input/target images; there is no bias
    term.  ``lam == 0`` is allowed when X^T X is nonsingular.  Dimensions
    above MAX_FULL_RR_DIMENSION are rejected: this baseline is a
    desk-scale oracle, not the production path.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    d = ds.n_positions
    if d > MAX_FULL_RR_DIMENSION:
        raise DimensionTooLarge(
            f"full solve needs a {d}x{d} system; guard is {MAX_FULL_RR_DIMENSION}"
        )
    if lam == 0 and ds.n_pairs < d:
        raise SingularSystem(
            f"X^T X has rank at most {ds.n_pairs} < {d}; use lam > 0"
        )
    x = ds.flat_inputs
    t = ds.flat_targets
    gram = x.T @ x
    gram[np.diag_indices_from(gram)] += lam
    # X^T X + lam I is symmetric positive (semi-)definite: a Cholesky
    # factorization both solves and certifies nonsingularity
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"X^T X + lam I is singular: {exc}") from exc
    rhs = x.T @ t
    y = solve_triangular(chol, rhs, lower=True, check_finite=False)
    coeffs = solve_triangular(chol, y, lower=True, trans="T", check_finite=False)
    return FullRRModel(ds.geometry, coeffs.T, lam)


def apply_full_rr(model: FullRRModel, img: Image) -> Image:
    """Apply the dense map to one vectorized image, clamped to [0, 1]."""
    if img.geometry != model.geometry:
        raise GeometryMismatch(
            f"image geometry {img.geometry} != model geometry {model.geometry}"
        )
    out = model.matrix @ img.flat()
    return Image(np.clip(out, 0.0, 1.0).reshape(model.geometry))
