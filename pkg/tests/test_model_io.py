import numpy as np
import pytest

from pxfes import (
    BadMagic,
    FullRRModel,
    PixelKRModel,
    PixelRRModel,
    TruncatedPayload,
    UnknownModelKind,
    UnsupportedVersion,
    load_model,
    save_model,
)
from pxfes.model_io import encode_model


def _rr_model(seed=0, h=3, w=2):
    rng = np.random.default_rng(seed)
    n = h * w
    return PixelRRModel((h, w, 1), rng.normal(1, 0.1, n), rng.normal(0, 0.1, n), 0.4)


def _kr_model(seed=1, h=2, w=2, n=5):
    rng = np.random.default_rng(seed)
    pos = h * w
    return PixelKRModel(
        (h, w, 1), 3.0, 0.4, rng.uniform(0, 1, (pos, n)), rng.normal(0, 1, (pos, n))
    )


def _full_model(seed=2, h=2, w=2):
    rng = np.random.default_rng(seed)
    pos = h * w
    return FullRRModel((h, w, 1), rng.normal(0, 1, (pos, pos)), 0.4)


@pytest.mark.parametrize("factory", [_rr_model, _kr_model, _full_model])
def test_round_trip_is_byte_identical(tmp_path, factory):
    model = factory()
    path = tmp_path / "m.pxf"
    save_model(model, str(path))
    blob = path.read_bytes()
    reloaded = load_model(str(path))
    assert encode_model(reloaded) == blob


def test_rr_fields_survive_round_trip(tmp_path):
    model = _rr_model()
    path = str(tmp_path / "m.pxf")
    save_model(model, path)
    back = load_model(path)
    assert type(back) is PixelRRModel
    assert back.geometry == model.geometry
    assert back.lam == model.lam
    np.testing.assert_array_equal(back.weights, model.weights)
    np.testing.assert_array_equal(back.biases, model.biases)


def test_kr_fields_survive_round_trip(tmp_path):
    model = _kr_model()
    path = str(tmp_path / "m.pxf")
    save_model(model, path)
    back = load_model(path)
    assert type(back) is PixelKRModel
    assert back.sigma == model.sigma
    assert back.n_train == model.n_train
    np.testing.assert_array_equal(back.train_pixels, model.train_pixels)
    np.testing.assert_array_equal(back.coeffs, model.coeffs)


def test_full_fields_survive_round_trip(tmp_path):
    model = _full_model()
    path = str(tmp_path / "m.pxf")
    save_model(model, path)
    back = load_model(path)
    assert type(back) is FullRRModel
    np.testing.assert_array_equal(back.matrix, model.matrix)


def test_bad_magic(tmp_path):
    blob = encode_model(_rr_model())
    path = tmp_path / "m.pxf"
    path.write_bytes(b"XXFES1" + blob[6:])
    with pytest.raises(BadMagic):
        load_model(str(path))


def test_unsupported_version(tmp_path):
    blob = bytearray(encode_model(_rr_model()))
    blob[6] = 2
    path = tmp_path / "m.pxf"
    path.write_bytes(bytes(blob))
    with pytest.raises(UnsupportedVersion):
        load_model(str(path))


def test_unknown_kind(tmp_path):
    blob = bytearray(encode_model(_rr_model()))
    blob[7] = 0x7F
    path = tmp_path / "m.pxf"
    path.write_bytes(bytes(blob))
    with pytest.raises(UnknownModelKind):
        load_model(str(path))


def test_truncated_weights(tmp_path):
    blob = encode_model(_rr_model())
    path = tmp_path / "m.pxf"
    path.write_bytes(blob[: len(blob) - 13])
    with pytest.raises(TruncatedPayload):
        load_model(str(path))


def test_trailing_garbage_rejected(tmp_path):
    blob = encode_model(_rr_model())
    path = tmp_path / "m.pxf"
    path.write_bytes(blob + b"\x00" * 8)
    with pytest.raises(TruncatedPayload):
        load_model(str(path))


def test_kr_subheader_truncated(tmp_path):
    blob = encode_model(_kr_model())
    path = tmp_path / "m.pxf"
    path.write_bytes(blob[:23])  # header + part of the kernel subheader
    with pytest.raises(TruncatedPayload):
        load_model(str(path))


def test_header_shorter_than_fixed_part(tmp_path):
    path = tmp_path / "m.pxf"
    path.write_bytes(b"PXFES1\x01")
    with pytest.raises(TruncatedPayload):
        load_model(str(path))
