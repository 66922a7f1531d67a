"""Pluggable face detection with a deterministic sidecar-file stub.

Real detection is out of scope; the contract any detector must honour is
small: given a photo, return the same ordered box list every time. The
baseline ``SidecarDetector`` reads ``<photo path>.faces.json``, a JSON array
of ``{x, y, w, h}`` objects, in file order. A photo without a sidecar simply
has no detectable faces.
"""

import json
from pathlib import Path
from typing import Protocol

from ..errors import FormatError, IoError
from .ppm import FaceBox, PhotoRef

SIDECAR_SUFFIX = ".faces.json"


class FaceDetector(Protocol):
    def detect(self, photo: PhotoRef) -> list[FaceBox]: ...


class SidecarDetector:
    """Reads face boxes from the photo's sidecar annotation file."""

    def detect(self, photo: PhotoRef) -> list[FaceBox]:
        sidecar = Path(str(photo.path) + SIDECAR_SUFFIX)
        if not sidecar.exists():
            return []
        try:
            raw = json.loads(sidecar.read_text())
        except OSError as exc:
            raise IoError(f"cannot read sidecar {sidecar}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise FormatError(f"malformed sidecar {sidecar}: {exc}") from exc
        if not isinstance(raw, list):
            raise FormatError(f"sidecar {sidecar} must hold a JSON array")
        return [FaceBox.from_dict(entry) for entry in raw]


def detect_faces(photo: PhotoRef, detector: FaceDetector) -> list[FaceBox]:
    """Run the detector against a readable photo."""
    if not Path(photo.path).is_file():
        raise IoError(f"photo {photo.path} does not exist")
    return detector.detect(photo)
