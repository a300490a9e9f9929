import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pxfes import (
    CorruptHeader,
    Image,
    UnsupportedFormat,
    center_crop_resize,
    load_image,
    save_image,
    to_grayscale,
)


def _write(path, blob):
    path.write_bytes(blob)
    return str(path)


class TestImageType:
    def test_2d_array_becomes_single_channel(self):
        img = Image(np.zeros((3, 4)))
        assert img.geometry == (3, 4, 1)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Image(np.full((2, 2), 1.5))
        with pytest.raises(ValueError):
            Image(np.full((2, 2), -0.1))

    def test_rejects_bad_channel_count(self):
        with pytest.raises(ValueError):
            Image(np.zeros((2, 2, 2)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Image(np.array([[np.nan]]))

    def test_pixels_read_only_and_caller_array_untouched(self):
        arr = np.zeros((2, 2))
        img = Image(arr)
        assert not img.pixels.flags.writeable
        arr[0, 0] = 1.0  # caller's array must stay writable
        assert img.pixels[0, 0, 0] == 0.0


class TestPnmCodec:
    def test_load_pgm_scales_by_255(self, tmp_path):
        path = _write(tmp_path / "t.pgm", b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
        img = load_image(path)
        assert img.geometry == (2, 2, 1)
        expected = np.array([[0.0, 1.0], [128 / 255, 64 / 255]])
        np.testing.assert_array_equal(img.pixels[:, :, 0], expected)

    def test_load_ppm_all_255(self, tmp_path):
        path = _write(tmp_path / "t.ppm", b"P6\n2 1\n255\n" + bytes([255] * 6))
        img = load_image(path)
        assert img.geometry == (1, 2, 3)
        np.testing.assert_array_equal(img.pixels, np.ones((1, 2, 3)))

    def test_header_comments_skipped(self, tmp_path):
        blob = b"P5 # magic\n# a comment line\n2 1 # dims\n255\n" + bytes([7, 9])
        img = load_image(_write(tmp_path / "t.pgm", blob))
        np.testing.assert_array_equal(img.pixels[:, :, 0], [[7 / 255, 9 / 255]])

    def test_short_payload_is_corrupt(self, tmp_path):
        path = _write(tmp_path / "t.pgm", b"P5\n4 4\n255\n" + bytes(8))
        with pytest.raises(CorruptHeader):
            load_image(path)

    def test_non_255_maxval_unsupported(self, tmp_path):
        path = _write(tmp_path / "t.pgm", b"P5\n1 1\n65535\n\x00\x00")
        with pytest.raises(UnsupportedFormat):
            load_image(path)

    def test_garbage_header_field(self, tmp_path):
        path = _write(tmp_path / "t.pgm", b"P5\nxx 2\n255\n" + bytes(4))
        with pytest.raises(CorruptHeader):
            load_image(path)

    def test_unknown_magic(self, tmp_path):
        path = _write(tmp_path / "t.dat", b"GIF89a....")
        with pytest.raises(UnsupportedFormat):
            load_image(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_image(str(tmp_path / "absent.pgm"))


class TestSaveImage:
    def test_half_intensity_rounds_ties_to_even(self, tmp_path):
        # 0.5 * 255 = 127.5 -> 128
        path = tmp_path / "t.pgm"
        save_image(Image(np.full((1, 1), 0.5)), str(path))
        assert path.read_bytes().endswith(bytes([128]))

    def test_peak_intensity(self, tmp_path):
        path = tmp_path / "t.pgm"
        save_image(Image(np.ones((1, 1))), str(path))
        assert path.read_bytes().endswith(bytes([255]))

    def test_round_trip_bound(self, tmp_path):
        rng = np.random.default_rng(0)
        img = Image(rng.uniform(0.0, 1.0, (5, 7)))
        path = str(tmp_path / "t.pgm")
        save_image(img, path)
        back = load_image(path)
        assert np.abs(back.pixels - img.pixels).max() <= 1 / 510

    def test_ppm_round_trip_bound(self, tmp_path):
        rng = np.random.default_rng(1)
        img = Image(rng.uniform(0.0, 1.0, (4, 3, 3)))
        path = str(tmp_path / "t.ppm")
        save_image(img, path)
        assert np.abs(load_image(path).pixels - img.pixels).max() <= 1 / 510

    def test_channel_format_mismatch(self, tmp_path):
        with pytest.raises(UnsupportedFormat):
            save_image(Image(np.zeros((2, 2, 3))), str(tmp_path / "t.pgm"))
        with pytest.raises(UnsupportedFormat):
            save_image(Image(np.zeros((2, 2, 1))), str(tmp_path / "t.ppm"))

    def test_unknown_extension(self, tmp_path):
        with pytest.raises(UnsupportedFormat):
            save_image(Image(np.zeros((2, 2))), str(tmp_path / "t.bmp"))

    def test_unwritable_path(self, tmp_path):
        from pxfes import IoFailure

        with pytest.raises(IoFailure):
            save_image(Image(np.zeros((2, 2))), str(tmp_path / "no-such-dir" / "t.pgm"))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_round_trip_bound_property(self, seed):
        import os
        import tempfile

        rng = np.random.default_rng(seed)
        img = Image(rng.uniform(0.0, 1.0, (3, 4)))
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "t.pgm")
            save_image(img, path)
            assert np.abs(load_image(path).pixels - img.pixels).max() <= 1 / 510


class TestPng:
    def test_gray_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        img = Image(rng.integers(0, 256, (6, 5)) / 255.0)
        path = str(tmp_path / "t.png")
        save_image(img, path)
        back = load_image(path)
        np.testing.assert_array_equal(back.pixels, img.pixels)

    def test_rgb_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        img = Image(rng.integers(0, 256, (4, 4, 3)) / 255.0)
        path = str(tmp_path / "t.png")
        save_image(img, path)
        np.testing.assert_array_equal(load_image(path).pixels, img.pixels)

    @pytest.mark.parametrize("mode", ["RGBA", "P", "I;16", "LA"])
    def test_unsupported_png_modes(self, tmp_path, mode):
        from PIL import Image as PILImage

        pil = PILImage.new(mode, (4, 4))
        path = tmp_path / "t.png"
        pil.save(path)
        with pytest.raises(UnsupportedFormat):
            load_image(str(path))

    def test_corrupt_png(self, tmp_path):
        path = _write(tmp_path / "t.png", b"\x89PNG\r\n\x1a\n" + b"junk")
        with pytest.raises(CorruptHeader):
            load_image(str(path))


class TestGrayscale:
    def test_single_channel_identity(self):
        img = Image(np.full((2, 2), 0.3))
        assert to_grayscale(img) is img

    def test_equal_channels_exact(self):
        img = Image(np.ones((1, 1, 3)))
        assert to_grayscale(img).pixels[0, 0, 0] == 1.0

    def test_red_weight_exact(self):
        img = Image(np.array([[[1.0, 0.0, 0.0]]]))
        assert to_grayscale(img).pixels[0, 0, 0] == 0.299

    def test_luminance_formula(self):
        rgb = np.array([[[0.25, 0.5, 0.75]]])
        got = to_grayscale(Image(rgb)).pixels[0, 0, 0]
        assert got == pytest.approx(0.299 * 0.25 + 0.587 * 0.5 + 0.114 * 0.75, abs=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_output_stays_in_unit_interval(self, seed):
        rng = np.random.default_rng(seed)
        img = Image(rng.uniform(0.0, 1.0, (3, 3, 3)))
        out = to_grayscale(img)
        assert out.channels == 1
        assert out.pixels.min() >= 0.0 and out.pixels.max() <= 1.0


class TestCenterCropResize:
    def test_identity_when_sizes_match(self):
        rng = np.random.default_rng(4)
        img = Image(rng.uniform(0.0, 1.0, (9, 7)))
        out = center_crop_resize(img, 9, 7)
        np.testing.assert_array_equal(out.pixels, img.pixels)

    def test_constant_preserved_exactly(self):
        img = Image(np.full((10, 6), 0.3))
        out = center_crop_resize(img, 4, 4)
        np.testing.assert_array_equal(out.pixels, np.full((4, 4, 1), 0.3))

    def test_crop_window_selection(self):
        # image is zero outside the central 6x6 window; cropping 12x6 to a
        # square must keep exactly that window, so the output is constant
        arr = np.zeros((12, 6))
        arr[3:9, :] = 0.7
        out = center_crop_resize(Image(arr), 4, 4)
        np.testing.assert_array_equal(out.pixels, np.full((4, 4, 1), 0.7))

    def test_256x192_to_square_keeps_central_192(self):
        # 256x192 to 128x128: the crop is the centered 192x192 window
        # (rows 32..224); marking exactly that window constant proves both
        # the window size and its placement
        arr = np.zeros((256, 192))
        arr[32:224, :] = 0.7
        out = center_crop_resize(Image(arr), 128, 128)
        assert out.geometry == (128, 128, 1)
        np.testing.assert_array_equal(out.pixels, np.full((128, 128, 1), 0.7))

    def test_two_by_two_average(self):
        arr = np.array([[0.0, 1.0], [1.0, 0.0]])
        out = center_crop_resize(Image(arr), 1, 1)
        assert out.pixels[0, 0, 0] == pytest.approx(0.5, abs=1e-15)

    def test_output_range_and_shape(self):
        rng = np.random.default_rng(5)
        img = Image(rng.uniform(0.0, 1.0, (21, 33, 3)))
        out = center_crop_resize(img, 8, 5)
        assert out.geometry == (8, 5, 3)
        assert out.pixels.min() >= 0.0 and out.pixels.max() <= 1.0

    def test_upscale(self):
        img = Image(np.array([[0.0, 1.0]]))
        out = center_crop_resize(img, 1, 4)
        assert out.geometry == (1, 4, 1)
        assert np.all(np.diff(out.pixels[0, :, 0]) >= 0)

    def test_rejects_bad_target(self):
        with pytest.raises(ValueError):
            center_crop_resize(Image(np.zeros((2, 2))), 0, 4)
