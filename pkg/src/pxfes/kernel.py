"""Per-pixel Gaussian kernel ridge regression.

Each position ``p`` gets its own one-dimensional kernel regressor over
the N training values observed there.  Lifting values through a feature
map ``phi`` and writing the ridge weights as a combination of the mapped
training inputs (the representer theorem) reduces the fit to coefficients
``c_p`` minimizing

    E(c_p) = 1/2 ||c_p K_p - t_p||^2 + lam/2 * c_p K_p c_p^T

whose stationary point is ``c_p = t_p (K_p + lam I)^-1`` with the N x N
kernel matrix ``K_p[i, j] = k(x_p^i, x_p^j)``.  The kernel is Gaussian,
``k(a, b) = exp(-(a - b)^2 / (2 sigma^2))``, so K_p is symmetric positive
semi-definite and ``K_p + lam I`` is positive definite for lam > 0.
Prediction for a query value ``x`` is ``c_p . kappa(x)`` with
``kappa(x)[i] = k(x_p^i, x)``; the feature map itself is never
materialized.

Training solves each position's system through a Cholesky factorization,
chunked over positions.  Chunk boundaries are fixed, so results are
bit-identical however many worker threads run the chunks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .dataset import PairedDataset, PixelSeries
from .errors import GeometryMismatch, IndexOutOfRange, InvalidBandwidth, SolveFailure
from .image import Image
from .parallel import chunk_spans, run_chunks, thread_count

# Cap on chunk scratch memory: elements per (chunk, N, N) kernel stack.
_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class PixelKRModel:
    """Per-position kernel regressors: stored training values + coefficients.

    ``train_pixels`` and ``coeffs`` have shape (H*W*C, N), positions in
    row-major channel-innermost order.  The reported parameter count is
    the coefficient count H*W*C*N; the serialized file additionally
    stores the training values (twice the payload).
    """

    geometry: tuple[int, int, int]
    sigma: float
    lam: float
    train_pixels: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        h, w, c = self.geometry
        n_pos = h * w * c
        tp = np.asarray(self.train_pixels, dtype=np.float64)
        cf = np.asarray(self.coeffs, dtype=np.float64)
        if tp.ndim != 2 or tp.shape[0] != n_pos:
            raise ValueError(f"train_pixels must be ({n_pos}, N), got {tp.shape}")
        if cf.shape != tp.shape:
            raise ValueError(f"coeffs shape {cf.shape} != train_pixels shape {tp.shape}")
        if tp.shape[1] < 1:
            raise ValueError("model needs at least one training pair")
        if float(self.sigma) <= 0:
            raise InvalidBandwidth(f"sigma must be > 0, got {self.sigma}")
        if not np.all(np.isfinite(cf)):
            raise ValueError("coefficients must be finite")
        if not np.all(np.isfinite(tp)) or tp.min() < 0.0 or tp.max() > 1.0:
            raise ValueError("stored training values must lie in [0, 1]")
        tp = tp.copy(order="C")
        cf = cf.copy(order="C")
        tp.flags.writeable = False
        cf.flags.writeable = False
        object.__setattr__(self, "geometry", (int(h), int(w), int(c)))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "train_pixels", tp)
        object.__setattr__(self, "coeffs", cf)

    @property
    def n_train(self) -> int:
        return self.train_pixels.shape[1]


def gaussian_kernel(a, b, sigma: float):
    """Gaussian similarity exp(-(a - b)^2 / (2 sigma^2)); broadcasts."""
    if sigma <= 0:
        raise InvalidBandwidth(f"sigma must be > 0, got {sigma}")
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return np.exp(-(diff * diff) / (2.0 * sigma * sigma))


def kernel_matrix(x, sigma: float) -> np.ndarray:
    """N x N matrix of pairwise Gaussian similarities (symmetric, unit diagonal)."""
    x = np.asarray(x, dtype=np.float64)
    return gaussian_kernel(x[:, np.newaxis], x[np.newaxis, :], sigma)


def _chunk_size(n_train: int) -> int:
    return max(1, _CHUNK_ELEMENTS // (n_train * n_train))


def train_pixel_kr(
    ds: PairedDataset, lam: float, sigma: float, threads: int | None = None
) -> PixelKRModel:
    """Fit per-position kernel ridge coefficients c_p = t_p (K_p + lam I)^-1.

    ``lam`` must be strictly positive so every K_p + lam I is positive
    definite even with duplicate training values (8-bit data quantizes).
    ``threads`` caps worker threads (default: PXFES_THREADS or an
    implementation-chosen cap); the result does not depend on it.

    Raises
    ------
    InvalidBandwidth
        sigma <= 0.
    SolveFailure
        A position's system lost positive definiteness (non-finite data).
    """
    if lam <= 0:
        raise ValueError(f"lam must be > 0 for training, got {lam}")
    if sigma <= 0:
        raise InvalidBandwidth(f"sigma must be > 0, got {sigma}")
    x = ds.flat_inputs
    t = ds.flat_targets
    n_pos = ds.n_positions
    n = ds.n_pairs
    train_pixels = np.ascontiguousarray(x.T)
    targets = np.ascontiguousarray(t.T)
    coeffs = np.empty_like(train_pixels)

    def worker(start: int, stop: int) -> None:
        coeffs[start:stop] = _solve_coeff_block(
            train_pixels[start:stop], targets[start:stop], lam, sigma
        )

    spans = chunk_spans(n_pos, _chunk_size(n))
    run_chunks(spans, worker, thread_count(threads))
    return PixelKRModel(ds.geometry, sigma, lam, train_pixels, coeffs)


def _solve_coeff_block(
    values: np.ndarray, targets: np.ndarray, lam: float, sigma: float
) -> np.ndarray:
    """Solve (K + lam I) c^T = t^T for a block of positions.

    ``values``/``targets`` are (m, N); one Cholesky factorization per
    position, batched over the block.
    """
    m, n = values.shape
    k = values[:, :, np.newaxis] - values[:, np.newaxis, :]
    np.multiply(k, k, out=k)
    k *= -1.0 / (2.0 * sigma * sigma)
    np.exp(k, out=k)
    idx = np.arange(n)
    k[:, idx, idx] += lam
    try:
        chol = np.linalg.cholesky(k)
    except np.linalg.LinAlgError as exc:
        raise SolveFailure(f"kernel system not positive definite: {exc}") from exc
    out = np.empty_like(targets)
    for i in range(m):
        y = solve_triangular(chol[i], targets[i], lower=True, check_finite=False)
        out[i] = solve_triangular(chol[i], y, lower=True, trans="T", check_finite=False)
    if not np.all(np.isfinite(out)):
        raise SolveFailure("kernel solve produced non-finite coefficients")
    return out


def fit_kernel_series(x, t, lam: float, sigma: float) -> np.ndarray:
    """Solve one position's kernel system directly (lam >= 0 allowed).

    The lam == 0 path exists for analytic interpolation experiments on
    distinct values; the public trainer enforces lam > 0.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    if sigma <= 0:
        raise InvalidBandwidth(f"sigma must be > 0, got {sigma}")
    x = np.asarray(x, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    return _solve_coeff_block(x[np.newaxis, :], t[np.newaxis, :], lam, sigma)[0]


def predict_pixel_kr(model: PixelKRModel, p: int, x: float) -> float:
    """Unclamped prediction c_p . kappa(x) at position ``p`` for value ``x``."""
    h, w, c = model.geometry
    n_pos = h * w * c
    if not 0 <= p < n_pos:
        raise IndexOutOfRange(f"position {p} outside [0, {n_pos})")
    kappa = gaussian_kernel(model.train_pixels[p], x, model.sigma)
    return float(model.coeffs[p] @ kappa)


def apply_pixel_kr(model: PixelKRModel, img: Image) -> Image:
    """Predict every position from its own input pixel, clamped to [0, 1].

    Kernel vectors are rebuilt from the stored training values per call;
    output position ``p`` depends on input position ``p`` only.
    """
    if img.geometry != model.geometry:
        raise GeometryMismatch(
            f"image geometry {img.geometry} != model geometry {model.geometry}"
        )
    x = img.flat()
    n_pos = x.shape[0]
    out = np.empty(n_pos)
    for start, stop in chunk_spans(n_pos, max(1, _CHUNK_ELEMENTS // model.n_train)):
        kappa = gaussian_kernel(
            model.train_pixels[start:stop], x[start:stop, np.newaxis], model.sigma
        )
        out[start:stop] = np.einsum("pn,pn->p", model.coeffs[start:stop], kappa)
    return Image(np.clip(out, 0.0, 1.0).reshape(model.geometry))


def pixel_kr_objective(c, series: PixelSeries, lam: float, sigma: float) -> float:
    """Kernel ridge objective 1/2 ||c K - t||^2 + lam/2 c K c^T for one position."""
    c = np.asarray(c, dtype=np.float64)
    if c.shape != series.x.shape:
        raise ValueError(f"coefficient vector must have length {series.n}, got {c.shape}")
    k = kernel_matrix(series.x, sigma)
    ck = c @ k
    r = ck - series.t
    return float(0.5 * (r @ r) + 0.5 * lam * (ck @ c))
