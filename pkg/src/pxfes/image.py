"""Image container, codecs, and geometric normalization.

Pixels live as float64 intensities in [0, 1]; 8-bit samples are converted
only at the file boundary (``s / 255`` on read, banker's rounding of
``v * 255`` on write, so a save/load round trip moves a pixel by at most
1/510).  Binary PGM (P5) and PPM (P6) with maxval 255 are read and
written natively; 8-bit grayscale/RGB PNG is read through Pillow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._fsio import atomic_write_bytes
from .errors import CorruptHeader, UnsupportedFormat

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_PNM_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclass(frozen=True)
class Image:
    """An immutable height x width x channels grid of intensities in [0, 1].

    ``pixels`` is always a read-only contiguous float64 array of shape
    ``(height, width, channels)`` with channels 1 or 3; a 2-D array is
    accepted and treated as single-channel.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim == 2:
            px = px[:, :, np.newaxis]
        if px.ndim != 3:
            raise ValueError(f"expected 2-D or 3-D pixel array, got {px.ndim}-D")
        h, w, c = px.shape
        if h < 1 or w < 1:
            raise ValueError(f"image dimensions must be positive, got {h}x{w}")
        if c not in (1, 3):
            raise ValueError(f"channel count must be 1 or 3, got {c}")
        if not np.all(np.isfinite(px)):
            raise ValueError("pixel intensities must be finite")
        lo, hi = float(px.min()), float(px.max())
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"pixel intensities must lie in [0, 1], got [{lo}, {hi}]")
        px = px.copy(order="C")  # never freeze a caller-owned array
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def geometry(self) -> tuple[int, int, int]:
        """(height, width, channels)."""
        return self.pixels.shape

    @property
    def n_positions(self) -> int:
        """Number of pixel positions H*W*C (row-major, channel-innermost)."""
        return self.pixels.size

    def flat(self) -> np.ndarray:
        """Row-major, channel-innermost view of the intensities."""
        return self.pixels.reshape(-1)


def load_image(path) -> Image:
    """Load a PGM/PPM/PNG file into an :class:`Image`.

    8-bit sample ``s`` maps to intensity ``s / 255`` exactly.

    Raises
    ------
    FileNotFoundError
        ``path`` does not exist.
    UnsupportedFormat
        Not a P5/P6/PNG file, non-255 maxval, or a PNG mode other than
        8-bit L/RGB.
    CorruptHeader
        Malformed header or payload shorter than the header promises.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P5", b"P6"):
        return _decode_pnm(data)
    if data[:8] == _PNG_SIGNATURE:
        return _decode_png(path)
    raise UnsupportedFormat(f"{path}: not a binary PGM/PPM or PNG file")


def save_image(img: Image, path) -> None:
    """Write ``img`` to ``path``; the format is chosen by extension.

    ``.pgm`` requires a 1-channel image, ``.ppm`` a 3-channel one, and
    ``.png`` accepts either.  Intensity ``v`` becomes the 8-bit sample
    ``round(v * 255)`` with ties to even.  The write is atomic.

    Raises
    ------
    UnsupportedFormat
        Unknown extension or channel count not matching the format.
    IoFailure
        Target path cannot be written.
    """
    suffix = str(path).lower().rsplit(".", 1)
    ext = suffix[1] if len(suffix) == 2 else ""
    samples = np.rint(img.pixels * 255.0).astype(np.uint8)
    if ext == "pgm":
        if img.channels != 1:
            raise UnsupportedFormat("PGM stores single-channel images only")
        header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
        atomic_write_bytes(path, header + samples.tobytes())
    elif ext == "ppm":
        if img.channels != 3:
            raise UnsupportedFormat("PPM stores 3-channel images only")
        header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
        atomic_write_bytes(path, header + samples.tobytes())
    elif ext == "png":
        atomic_write_bytes(path, _encode_png(samples))
    else:
        raise UnsupportedFormat(f"cannot infer image format from {path!r}")


def to_grayscale(img: Image) -> Image:
    """Collapse a 3-channel image to luminance y = 0.299R + 0.587G + 0.114B.

    Single-channel input is returned unchanged.  The sum is anchored at
    the green channel so pixels with equal channels keep their exact
    value (the three weights sum to 1 only in exact arithmetic).
    """
    if img.channels == 1:
        return img
    r = img.pixels[:, :, 0]
    g = img.pixels[:, :, 1]
    b = img.pixels[:, :, 2]
    y = g + 0.299 * (r - g) + 0.114 * (b - g)
    return Image(np.clip(y, 0.0, 1.0))


def center_crop_resize(img: Image, out_h: int, out_w: int) -> Image:
    """Crop the largest centered window with aspect ratio out_w:out_h,
    then bilinearly resample to ``out_h x out_w``.

    The crop and the resample are both identities when the input already
    has the requested dimensions, and constant images stay constant.
    """
    if out_h < 1 or out_w < 1:
        raise ValueError(f"output dimensions must be positive, got {out_h}x{out_w}")
    h, w = img.height, img.width
    if w * out_h >= h * out_w:
        # width is the loose dimension: keep full height
        crop_h = h
        crop_w = min(w, round(h * out_w / out_h))
    else:
        crop_w = w
        crop_h = min(h, round(w * out_h / out_w))
    crop_h = max(crop_h, 1)
    crop_w = max(crop_w, 1)
    r0 = (h - crop_h) // 2
    c0 = (w - crop_w) // 2
    window = img.pixels[r0:r0 + crop_h, c0:c0 + crop_w]
    out = _resize_bilinear(window, out_h, out_w)
    return Image(np.clip(out, 0.0, 1.0))


def _resize_bilinear(arr: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Separable bilinear resample with pixel-center alignment.

    When input and output sizes agree the source coordinates land exactly
    on the source grid, so the result equals the input.  Interpolation is
    written as ``a + t*(b - a)`` so equal neighbors pass through exactly.
    """
    h, w = arr.shape[:2]
    if (h, w) == (out_h, out_w):
        return arr.copy()

    def _axis_coords(n_in, n_out):
        pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        base = np.floor(pos)
        frac = pos - base
        i0 = np.clip(base.astype(np.int64), 0, n_in - 1)
        i1 = np.clip(base.astype(np.int64) + 1, 0, n_in - 1)
        return i0, i1, frac

    y0, y1, fy = _axis_coords(h, out_h)
    x0, x1, fx = _axis_coords(w, out_w)
    rows = arr[y0] + fy[:, None, None] * (arr[y1] - arr[y0])
    out = rows[:, x0] + fx[None, :, None] * (rows[:, x1] - rows[:, x0])
    return out


# --- PNM codec ----------------------------------------------------------

def _next_pnm_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        ch = data[pos]
        if ch in _PNM_WHITESPACE:
            pos += 1
        elif ch == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _PNM_WHITESPACE:
        pos += 1
    if start == pos:
        raise CorruptHeader("truncated PNM header")
    return data[start:pos], pos


def _decode_pnm(data: bytes) -> Image:
    channels = 1 if data[:2] == b"P5" else 3
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _next_pnm_token(data, pos)
        if not token.isdigit():
            raise CorruptHeader(f"non-numeric PNM header field {token!r}")
        fields.append(int(token))
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise CorruptHeader(f"invalid PNM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormat(f"only 8-bit maxval 255 supported, got {maxval}")
    if pos >= len(data) or data[pos] not in _PNM_WHITESPACE:
        raise CorruptHeader("missing whitespace after PNM maxval")
    pos += 1
    count = height * width * channels
    if len(data) - pos < count:
        raise CorruptHeader(
            f"PNM payload holds {len(data) - pos} bytes, header implies {count}"
        )
    samples = np.frombuffer(data, dtype=np.uint8, count=count, offset=pos)
    return Image(samples.reshape(height, width, channels) / 255.0)


# --- PNG via Pillow -----------------------------------------------------

def _decode_png(path) -> Image:
    from PIL import Image as PILImage, UnidentifiedImageError

    try:
        with PILImage.open(path) as im:
            mode = im.mode
            if mode not in ("L", "RGB"):
                raise UnsupportedFormat(
                    f"PNG mode {mode!r} not supported (8-bit grayscale or RGB only)"
                )
            arr = np.asarray(im, dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as exc:
        raise CorruptHeader(f"{path}: corrupt PNG ({exc})") from exc
    if arr.ndim == 2:
        arr = arr[:, :, np.newaxis]
    return Image(arr / 255.0)


def _encode_png(samples: np.ndarray) -> bytes:
    import io

    from PIL import Image as PILImage

    if samples.shape[2] == 1:
        pil = PILImage.fromarray(samples[:, :, 0], mode="L")
    else:
        pil = PILImage.fromarray(samples, mode="RGB")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()
