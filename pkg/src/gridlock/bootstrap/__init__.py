"""Face-image bootstrapping: turn a local photo corpus into the 45-image set.

Two modes mirror the two registration flows:

* ``jack``: a pluggable face detector finds boxes in each friend's photo and
  the first detected face is cropped, one worker per friend.
* ``jill``: user-made tags (a manifest of named bounding boxes) already say
  where the faces are; the pipeline just crops them.

Both converge on the same ``FaceImage`` records and the same on-disk layout:
``index.json`` plus PPM crops under ``crops/``.
"""

from .detector import FaceDetector, SidecarDetector, detect_faces
from .faces import FaceImage, derive_image_id, extract_face, extract_first_face
from .manifest import TagEntry, ingest_tags, load_tag_manifest
from .pipeline import (
    BootstrapOutcome,
    PipelineConfig,
    PipelineEvent,
    SkipRecord,
    collect_events,
    load_face_index,
    run_pipeline,
    select_for_registration,
    write_face_index,
)
from .ppm import FaceBox, PhotoRef, crop_box, read_ppm, write_ppm

__all__ = [
    "BootstrapOutcome",
    "FaceBox",
    "FaceDetector",
    "FaceImage",
    "PhotoRef",
    "PipelineConfig",
    "PipelineEvent",
    "SidecarDetector",
    "SkipRecord",
    "TagEntry",
    "collect_events",
    "crop_box",
    "derive_image_id",
    "detect_faces",
    "extract_face",
    "extract_first_face",
    "ingest_tags",
    "load_face_index",
    "load_tag_manifest",
    "read_ppm",
    "run_pipeline",
    "select_for_registration",
    "write_face_index",
]
