import numpy as np
import pytest

from gridlock.bootstrap.ppm import FaceBox, crop_box, read_ppm, write_ppm
from gridlock.errors import FormatError, IoError, ValidationError


def test_write_read_roundtrip(tmp_path):
    pixels = np.random.default_rng(0).integers(0, 256, (10, 7, 3), dtype=np.uint8)
    path = tmp_path / "img.ppm"
    write_ppm(path, pixels)
    assert (read_ppm(path) == pixels).all()


def test_read_handles_comments(tmp_path):
    path = tmp_path / "c.ppm"
    body = bytes(range(2 * 2 * 3))
    path.write_bytes(b"P6\n# a comment\n2 2\n# another\n255\n" + body)
    pixels = read_ppm(path)
    assert pixels.shape == (2, 2, 3)
    assert pixels.tobytes() == body


def test_read_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.ppm"
    path.write_bytes(b"P5\n2 2\n255\n" + b"\0" * 4)
    with pytest.raises(FormatError):
        read_ppm(path)


def test_read_rejects_bad_maxval(tmp_path):
    path = tmp_path / "bad.ppm"
    path.write_bytes(b"P6\n2 2\n65535\n" + b"\0" * 24)
    with pytest.raises(FormatError):
        read_ppm(path)


def test_read_rejects_truncated_body(tmp_path):
    path = tmp_path / "short.ppm"
    path.write_bytes(b"P6\n4 4\n255\n" + b"\0" * 5)
    with pytest.raises(FormatError):
        read_ppm(path)


def test_read_missing_file_is_io_error(tmp_path):
    with pytest.raises(IoError):
        read_ppm(tmp_path / "absent.ppm")


def test_facebox_validation():
    box = FaceBox(1, 2, 3, 4)
    assert FaceBox.from_dict(box.to_dict()) == box
    with pytest.raises(ValidationError):
        FaceBox(-1, 0, 3, 3)
    with pytest.raises(ValidationError):
        FaceBox(0, 0, 0, 3)
    with pytest.raises(FormatError):
        FaceBox.from_dict({"x": 1, "y": 2, "w": 3})


def test_crop_matches_slicing_oracle():
    rng = np.random.default_rng(1)
    pixels = rng.integers(0, 256, (20, 30, 3), dtype=np.uint8)
    box = FaceBox(x=4, y=5, w=9, h=8)
    crop = crop_box(pixels, box)
    assert (crop == pixels[5:13, 4:13]).all()
    assert crop.base is None  # a real copy, not a view


def test_crop_out_of_bounds_rejected():
    pixels = np.zeros((10, 10, 3), dtype=np.uint8)
    with pytest.raises(ValidationError):
        crop_box(pixels, FaceBox(8, 8, 4, 4))
