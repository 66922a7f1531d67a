"""Binary PPM (P6) reading, writing, and box cropping.

P6 is the pipeline's baseline format because it is trivially parseable and
byte-exact, which lets crop tests compare against a per-pixel oracle with no
codec in the way. Images are numpy arrays of shape (height, width, 3),
dtype uint8.
"""

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import FormatError, IoError, ValidationError


@dataclass(frozen=True)
class PhotoRef:
    """A photo in the local corpus standing in for a downloaded picture."""

    photo_id: str
    path: Path

    def to_dict(self) -> dict:
        return {"photo_id": self.photo_id, "photo_path": str(self.path)}


@dataclass(frozen=True)
class FaceBox:
    """Axis-aligned face bounding box, top-left origin, in pixels."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.x < 0 or self.y < 0:
            raise ValidationError(f"box origin must be non-negative: {self}")
        if self.w <= 0 or self.h <= 0:
            raise ValidationError(f"box extent must be positive: {self}")

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_dict(cls, data: dict) -> "FaceBox":
        try:
            return cls(int(data["x"]), int(data["y"]), int(data["w"]), int(data["h"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed box: {data!r}") from exc


def _read_header_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comments, then read one token.
    n = len(buf)
    while pos < n:
        ch = buf[pos : pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            while pos < n and buf[pos : pos + 1] != b"\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise FormatError("truncated PPM header")
    return buf[start:pos], pos


def read_ppm(path: Path | str) -> np.ndarray:
    path = Path(path)
    try:
        buf = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read photo {path}: {exc}") from exc
    if buf[:2] != b"P6":
        raise FormatError(f"{path}: not a binary PPM (P6) file")
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _read_header_token(buf, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise FormatError(f"{path}: bad PPM header token {token!r}") from None
    width, height, maxval = fields
    if maxval != 255:
        raise FormatError(f"{path}: unsupported maxval {maxval}, expected 255")
    if width <= 0 or height <= 0:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    pos += 1  # single whitespace byte after maxval
    expected = width * height * 3
    data = buf[pos : pos + expected]
    if len(data) != expected:
        raise FormatError(f"{path}: pixel data truncated")
    return np.frombuffer(data, dtype=np.uint8).reshape(height, width, 3).copy()


def write_ppm(path: Path | str, image: np.ndarray) -> None:
    if image.ndim != 3 or image.shape[2] != 3 or image.dtype != np.uint8:
        raise ValidationError("PPM writer expects a (h, w, 3) uint8 array")
    height, width = image.shape[:2]
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    tmp = Path(str(path) + f".tmp-{os.getpid()}")
    tmp.write_bytes(header + image.tobytes())
    os.replace(tmp, path)


def crop_box(image: np.ndarray, box: FaceBox) -> np.ndarray:
    """Copy of the box region; the box must lie fully inside the image."""
    height, width = image.shape[:2]
    if box.x + box.w > width or box.y + box.h > height:
        raise ValidationError(
            f"box {box} exceeds photo bounds {width}x{height}"
        )
    return image[box.y : box.y + box.h, box.x : box.x + box.w].copy()
