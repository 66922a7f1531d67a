"""Face extraction: crop a box out of a photo and record its provenance."""

import hashlib
from dataclasses import dataclass
from pathlib import Path

from ..errors import NoFaceError
from .detector import FaceDetector, detect_faces
from .ppm import FaceBox, PhotoRef, crop_box, read_ppm, write_ppm

CROPS_DIRNAME = "crops"


@dataclass(frozen=True)
class FaceImage:
    """A cropped face plus where it came from."""

    image_id: str
    friend_name: str
    source: PhotoRef
    box: FaceBox
    crop_path: Path

    def to_index_entry(self) -> dict:
        return {
            "image_id": self.image_id,
            "friend_name": self.friend_name,
            "photo_id": self.source.photo_id,
            "box": self.box.to_dict(),
            "crop_path": f"{CROPS_DIRNAME}/{self.image_id}.ppm",
        }


def derive_image_id(friend_name: str, photo_id: str, box: FaceBox) -> str:
    """Stable content-derived id; identical inputs collide on purpose, which
    makes pipeline output independent of worker count and completion order."""
    material = f"{friend_name}\x1f{photo_id}\x1f{box.x},{box.y},{box.w},{box.h}"
    return hashlib.sha256(material.encode("utf-8")).hexdigest()[:16]


def extract_face(
    photo: PhotoRef, box: FaceBox, friend_name: str, output_dir: Path
) -> FaceImage:
    """Crop ``box`` from the photo and write it under ``output_dir/crops/``."""
    image = read_ppm(photo.path)
    crop = crop_box(image, box)
    image_id = derive_image_id(friend_name, photo.photo_id, box)
    crops_dir = Path(output_dir) / CROPS_DIRNAME
    crops_dir.mkdir(parents=True, exist_ok=True)
    crop_path = crops_dir / f"{image_id}.ppm"
    write_ppm(crop_path, crop)
    return FaceImage(
        image_id=image_id,
        friend_name=friend_name,
        source=photo,
        box=box,
        crop_path=crop_path,
    )


def extract_first_face(
    photo: PhotoRef,
    detector: FaceDetector,
    friend_name: str,
    output_dir: Path,
) -> FaceImage:
    """Crop the first detected face, the detector's order deciding ties.

    No identity check is attempted: the first face in a friend's photo is
    not necessarily the friend.
    """
    boxes = detect_faces(photo, detector)
    if not boxes:
        raise NoFaceError(f"no face detected in {photo.photo_id}")
    return extract_face(photo, boxes[0], friend_name, output_dir)
