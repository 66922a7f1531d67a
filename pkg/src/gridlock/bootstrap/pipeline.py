"""Worker-pool pipeline: one worker per friend, progressive results.

Results stream out as friends finish so a consumer (the registration UI, the
service's polling endpoint) can act on early faces while later ones are
still processing. The final result set is deterministic regardless of worker
count or completion order: image ids are content-derived and the index is
order-normalised before writing.
"""

import json
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from ..errors import (
    CardinalityError,
    FormatError,
    GridlockError,
    IoError,
    UnknownImageError,
    ValidationError,
)
from ..geometry import CELLS
from .detector import FaceDetector, SidecarDetector
from .faces import FaceImage, extract_face, extract_first_face
from .ppm import FaceBox, PhotoRef

MODE_DETECTOR = "jack"
MODE_TAGS = "jill"
MODES = (MODE_DETECTOR, MODE_TAGS)


@dataclass(frozen=True)
class PipelineConfig:
    mode: str
    output_dir: Path
    workers: int = 1
    corpus_dir: Optional[Path] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")


@dataclass(frozen=True)
class SkipRecord:
    friend_name: str
    photo_id: Optional[str]
    reason: str

    def to_dict(self) -> dict:
        return {
            "friend_name": self.friend_name,
            "photo_id": self.photo_id,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class PipelineEvent:
    """One friend's outcome: either a face or a recorded skip."""

    friend_name: str
    face: Optional[FaceImage] = None
    skip: Optional[SkipRecord] = None


@dataclass
class BootstrapOutcome:
    faces: list[FaceImage] = field(default_factory=list)
    skipped: list[SkipRecord] = field(default_factory=list)


def _skip(friend_name: str, photo_id: Optional[str], exc: Exception) -> PipelineEvent:
    return PipelineEvent(
        friend_name,
        skip=SkipRecord(friend_name, photo_id, f"{type(exc).__name__}: {exc}"),
    )


def run_pipeline(
    config: PipelineConfig,
    friends: Sequence[tuple[str, PhotoRef]],
    detector: Optional[FaceDetector] = None,
) -> Iterator[PipelineEvent]:
    """Detector-driven extraction, one worker per friend, yielded as completed.

    Per-friend failures are reported as skip events and never abort the run.
    """
    detector = detector or SidecarDetector()

    def process(friend_name: str, photo: PhotoRef) -> PipelineEvent:
        try:
            face = extract_first_face(photo, detector, friend_name, config.output_dir)
            return PipelineEvent(friend_name, face=face)
        except GridlockError as exc:
            return _skip(friend_name, photo.photo_id, exc)
        except Exception as exc:  # noqa: BLE001  - isolation beats precision here
            return _skip(friend_name, photo.photo_id, exc)

    if not friends:
        return
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = [pool.submit(process, name, photo) for name, photo in friends]
        for future in as_completed(futures):
            yield future.result()


def collect_events(events: Iterable[PipelineEvent]) -> BootstrapOutcome:
    """Drain a pipeline stream into a deterministic outcome.

    Faces are sorted by image id; a repeated (friend, photo, box) triple
    collapses to one face and one recorded duplicate skip.
    """
    outcome = BootstrapOutcome()
    seen: dict[str, FaceImage] = {}
    for event in events:
        if event.face is not None:
            face = event.face
            if face.image_id in seen:
                outcome.skipped.append(
                    SkipRecord(face.friend_name, face.source.photo_id, "duplicate image_id")
                )
            else:
                seen[face.image_id] = face
        elif event.skip is not None:
            outcome.skipped.append(event.skip)
    outcome.faces = [seen[key] for key in sorted(seen)]
    outcome.skipped.sort(key=lambda s: (s.friend_name, s.photo_id or "", s.reason))
    return outcome


def select_for_registration(
    results: Sequence[FaceImage], chosen: Sequence[str]
) -> list[str]:
    """Validate a hand-off set: exactly 45 distinct ids, all from ``results``."""
    known = {face.image_id for face in results}
    picked = list(chosen)
    for image_id in picked:
        if image_id not in known:
            raise UnknownImageError(f"image id {image_id!r} is not a pipeline result")
    if len(set(picked)) != len(picked):
        raise ValidationError("chosen image ids must be distinct")
    if len(picked) != CELLS:
        raise CardinalityError(f"need exactly {CELLS} chosen images, got {len(picked)}")
    return picked


# -- index file -------------------------------------------------------------


def write_face_index(output_dir: Path, faces: Sequence[FaceImage]) -> Path:
    """Write ``index.json`` next to the crops, sorted by image id."""
    entries = sorted((f.to_index_entry() for f in faces), key=lambda e: e["image_id"])
    path = Path(output_dir) / "index.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n")
    return path


def load_face_index(path: Path | str) -> list[dict]:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise IoError(f"cannot read face index {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed face index {path}: {exc}") from exc
    if not isinstance(raw, list):
        raise FormatError(f"face index {path} must hold a JSON array")
    return raw


def scan_corpus(corpus_dir: Path | str) -> list[tuple[str, PhotoRef]]:
    """Default friend list for detector mode: every PPM in the corpus, the
    file stem doubling as friend name and photo id."""
    corpus = Path(corpus_dir)
    if not corpus.is_dir():
        raise IoError(f"corpus directory {corpus} does not exist")
    friends = []
    for path in sorted(corpus.glob("*.ppm")):
        friends.append((path.stem, PhotoRef(photo_id=path.stem, path=path)))
    return friends


def load_friends_file(path: Path | str) -> list[tuple[str, PhotoRef]]:
    """Explicit friend list: JSON array of {friend_name, photo_id, photo_path}."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise IoError(f"cannot read friends file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed friends file {path}: {exc}") from exc
    if not isinstance(raw, list):
        raise FormatError(f"friends file {path} must hold a JSON array")
    friends = []
    for entry in raw:
        try:
            friends.append(
                (
                    entry["friend_name"],
                    PhotoRef(photo_id=entry["photo_id"], path=Path(entry["photo_path"])),
                )
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed friends entry: {entry!r}") from exc
    return friends


def detector_pipeline_outcome(
    config: PipelineConfig,
    friends: Sequence[tuple[str, PhotoRef]],
    detector: Optional[FaceDetector] = None,
) -> BootstrapOutcome:
    return collect_events(run_pipeline(config, friends, detector))
