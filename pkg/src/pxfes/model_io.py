"""Binary model files (.pxf): compact little-endian serialization.

Layout (all little-endian):

    magic   6 bytes  "PXFES1"
    version u8       0x01
    kind    u8       0x01 per-pixel affine, 0x02 per-pixel kernel, 0x03 dense
    H, W    u16, u16
    C       u8
    lambda  f64
    payload kind-specific:
      0x01: H*W*C f64 weights, then H*W*C f64 biases
      0x02: u32 N; f64 sigma; then H*W*C blocks of
            (N f64 training values, N f64 coefficients)
      0x03: (H*W*C)^2 f64, row-major

Positions run row-major, channel-innermost.  Saving a loaded model
reproduces the file byte for byte.
"""

from __future__ import annotations

import struct

import numpy as np

from ._fsio import atomic_write_bytes
from .errors import BadMagic, TruncatedPayload, UnknownModelKind, UnsupportedVersion
from .kernel import PixelKRModel
from .linear import FullRRModel, PixelRRModel

MAGIC = b"PXFES1"
VERSION = 1

KIND_PIXEL_RR = 0x01
KIND_PIXEL_KR = 0x02
KIND_FULL_RR = 0x03

_HEADER = struct.Struct("<6sBBHHBd")
_KR_SUBHEADER = struct.Struct("<Id")

_F64 = np.dtype("<f8")


def model_kind(model) -> int:
    if isinstance(model, PixelRRModel):
        return KIND_PIXEL_RR
    if isinstance(model, PixelKRModel):
        return KIND_PIXEL_KR
    if isinstance(model, FullRRModel):
        return KIND_FULL_RR
    raise TypeError(f"not a model: {type(model).__name__}")


def kind_name(kind: int) -> str:
    return {
        KIND_PIXEL_RR: "pixel_rr",
        KIND_PIXEL_KR: "pixel_kr",
        KIND_FULL_RR: "full_rr",
    }[kind]


def encode_model(model) -> bytes:
    """Serialize a trained model to its file byte string."""
    h, w, c = model.geometry
    parts = [_HEADER.pack(MAGIC, VERSION, model_kind(model), h, w, c, model.lam)]
    if isinstance(model, PixelRRModel):
        parts.append(model.weights.astype(_F64, copy=False).tobytes())
        parts.append(model.biases.astype(_F64, copy=False).tobytes())
    elif isinstance(model, PixelKRModel):
        parts.append(_KR_SUBHEADER.pack(model.n_train, model.sigma))
        # interleave per position: training-value block, coefficient block
        blocks = np.stack([model.train_pixels, model.coeffs], axis=1)
        parts.append(blocks.astype(_F64, copy=False).tobytes())
    else:
        parts.append(model.matrix.astype(_F64, copy=False).tobytes())
    return b"".join(parts)


def save_model(model, path) -> None:
    """Atomically write a model file; identical models give identical bytes."""
    atomic_write_bytes(path, encode_model(model))


def decode_model(data: bytes):
    """Parse model file bytes back into the matching model value.

    Raises
    ------
    BadMagic
        Leading bytes are not the expected magic string.
    UnsupportedVersion
        Version byte other than 0x01.
    UnknownModelKind
        Kind byte does not name a regressor.
    TruncatedPayload
        Payload length differs from what the header implies.
    """
    if data[:6] != MAGIC:
        raise BadMagic(f"expected magic {MAGIC!r}, got {data[:6]!r}")
    if len(data) < _HEADER.size:
        raise TruncatedPayload(f"header needs {_HEADER.size} bytes, file has {len(data)}")
    _, version, kind, h, w, c, lam = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise UnsupportedVersion(f"version {version} not supported (expected {VERSION})")
    n_pos = h * w * c
    offset = _HEADER.size

    if kind == KIND_PIXEL_RR:
        values = _read_f64(data, offset, 2 * n_pos)
        return PixelRRModel((h, w, c), values[:n_pos], values[n_pos:], lam)

    if kind == KIND_PIXEL_KR:
        if len(data) < offset + _KR_SUBHEADER.size:
            raise TruncatedPayload("kernel model subheader missing")
        n_train, sigma = _KR_SUBHEADER.unpack_from(data, offset)
        offset += _KR_SUBHEADER.size
        blocks = _read_f64(data, offset, n_pos * 2 * n_train)
        blocks = blocks.reshape(n_pos, 2, n_train)
        return PixelKRModel((h, w, c), sigma, lam, blocks[:, 0], blocks[:, 1])

    if kind == KIND_FULL_RR:
        values = _read_f64(data, offset, n_pos * n_pos)
        return FullRRModel((h, w, c), values.reshape(n_pos, n_pos), lam)

    raise UnknownModelKind(f"unknown model kind byte 0x{kind:02x}")


def load_model(path):
    """Read and parse a model file (see :func:`decode_model` for errors)."""
    with open(path, "rb") as fh:
        return decode_model(fh.read())


def _read_f64(data: bytes, offset: int, count: int) -> np.ndarray:
    expected = offset + 8 * count
    if len(data) != expected:
        raise TruncatedPayload(
            f"payload length {len(data) - offset} bytes, header implies {8 * count}"
        )
    return np.frombuffer(data, dtype=_F64, count=count, offset=offset).astype(np.float64)
