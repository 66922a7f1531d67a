"""Tag-manifest ingestion: crop faces where users already drew the boxes.

The manifest is a JSON array of ``{photo_id, photo_path, friend_name, box}``
objects. No detection happens in this mode; a tag IS the face location.
Invalid entries (structurally broken, missing photo, out-of-bounds box) are
recorded and skipped, never fatal.
"""

import json
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional

from ..errors import FormatError, GridlockError, IoError
from .faces import extract_face
from .pipeline import (
    MODE_TAGS,
    BootstrapOutcome,
    PipelineConfig,
    PipelineEvent,
    SkipRecord,
    collect_events,
)
from .ppm import FaceBox, PhotoRef


@dataclass(frozen=True)
class TagEntry:
    photo: PhotoRef
    friend_name: str
    box: FaceBox


def _parse_tag(entry: dict) -> TagEntry:
    try:
        photo = PhotoRef(photo_id=entry["photo_id"], path=Path(entry["photo_path"]))
        friend_name = entry["friend_name"]
        box = FaceBox.from_dict(entry["box"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed tag entry: {entry!r}") from exc
    if not isinstance(friend_name, str) or not friend_name:
        raise FormatError(f"tag entry needs a non-empty friend_name: {entry!r}")
    return TagEntry(photo=photo, friend_name=friend_name, box=box)


def load_tag_manifest(path: Path | str) -> list[dict]:
    """Raw manifest entries; per-entry validation happens during ingestion."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise IoError(f"cannot read tag manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed tag manifest {path}: {exc}") from exc
    if not isinstance(raw, list):
        raise FormatError(f"tag manifest {path} must hold a JSON array")
    return raw


def tag_events(
    entries: list[dict], output_dir: Path, workers: int = 1
) -> Iterator[PipelineEvent]:
    """Crop each valid tag through the worker pool, yielding as completed."""

    def process(position: int, entry: dict) -> PipelineEvent:
        name = entry.get("friend_name") if isinstance(entry, dict) else None
        friend_name = name if isinstance(name, str) and name else f"entry-{position}"
        photo_id = entry.get("photo_id") if isinstance(entry, dict) else None
        try:
            tag = _parse_tag(entry)
            face = extract_face(tag.photo, tag.box, tag.friend_name, output_dir)
            return PipelineEvent(tag.friend_name, face=face)
        except GridlockError as exc:
            reason = f"{type(exc).__name__}: {exc}"
            return PipelineEvent(
                friend_name, skip=SkipRecord(friend_name, photo_id, reason)
            )

    if not entries:
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(process, i, e) for i, e in enumerate(entries)]
        for future in as_completed(futures):
            yield future.result()


def ingest_tags(
    manifest_path: Path | str,
    output_dir: Path | str,
    workers: int = 1,
) -> BootstrapOutcome:
    """One FaceImage per valid tag; skips carry the reason for each invalid one."""
    entries = load_tag_manifest(manifest_path)
    return collect_events(tag_events(entries, Path(output_dir), workers))


def tags_pipeline_config(output_dir: Path | str, workers: int = 1) -> PipelineConfig:
    return PipelineConfig(mode=MODE_TAGS, output_dir=Path(output_dir), workers=workers)
