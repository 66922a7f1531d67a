import threading

import pytest

from gridlock.bootstrap.pipeline import (
    MODE_DETECTOR,
    PipelineConfig,
    collect_events,
    load_friends_file,
    run_pipeline,
    scan_corpus,
    write_face_index,
)
from gridlock.bootstrap.ppm import FaceBox
from gridlock.errors import FormatError, ValidationError


class SlowFirstDetector:
    """Holds the first photo until released; everything else answers at once."""

    def __init__(self, gate: threading.Event, slow_photo: str):
        self.gate = gate
        self.slow_photo = slow_photo

    def detect(self, photo):
        if photo.photo_id == self.slow_photo:
            self.gate.wait(timeout=10)
        return [FaceBox(1, 1, 6, 6)]


class ExplodingDetector:
    def __init__(self, bad: set):
        self.bad = bad

    def detect(self, photo):
        if photo.photo_id in self.bad:
            raise RuntimeError("detector crashed")
        return [FaceBox(0, 0, 5, 5)]


def test_pipeline_config_validation(tmp_path):
    with pytest.raises(ValidationError):
        PipelineConfig(mode="karl", output_dir=tmp_path)
    with pytest.raises(ValidationError):
        PipelineConfig(mode=MODE_DETECTOR, output_dir=tmp_path, workers=0)


def test_worker_count_does_not_change_output(ppm_corpus, tmp_path):
    corpus, _, _ = ppm_corpus(n=12)
    friends = scan_corpus(corpus)
    indexes = []
    for workers in (1, 8):
        out = tmp_path / f"w{workers}"
        config = PipelineConfig(mode=MODE_DETECTOR, output_dir=out, workers=workers)
        outcome = collect_events(run_pipeline(config, friends))
        indexes.append(write_face_index(out, outcome.faces).read_bytes())
    assert indexes[0] == indexes[1]


def test_results_stream_before_the_slowest_finishes(ppm_corpus, tmp_path):
    corpus, _, _ = ppm_corpus(n=5)
    friends = scan_corpus(corpus)
    gate = threading.Event()
    detector = SlowFirstDetector(gate, slow_photo=friends[0][1].photo_id)
    config = PipelineConfig(mode=MODE_DETECTOR, output_dir=tmp_path / "out", workers=5)

    stream = run_pipeline(config, friends, detector)
    early = [next(stream) for _ in range(len(friends) - 1)]
    assert all(e.face is not None for e in early)
    assert friends[0][0] not in {e.friend_name for e in early}

    gate.set()
    last = list(stream)
    assert len(last) == 1
    assert last[0].friend_name == friends[0][0]


def test_one_bad_friend_does_not_poison_the_run(ppm_corpus, tmp_path):
    corpus, _, _ = ppm_corpus(n=6)
    friends = scan_corpus(corpus)
    detector = ExplodingDetector({friends[2][1].photo_id})
    config = PipelineConfig(mode=MODE_DETECTOR, output_dir=tmp_path / "out", workers=4)
    outcome = collect_events(run_pipeline(config, friends, detector))
    assert len(outcome.faces) == 5
    assert len(outcome.skipped) == 1
    assert "RuntimeError" in outcome.skipped[0].reason


def test_empty_friend_list_yields_nothing(tmp_path):
    config = PipelineConfig(mode=MODE_DETECTOR, output_dir=tmp_path, workers=2)
    assert list(run_pipeline(config, [])) == []


def test_scan_corpus_sorts_by_name(ppm_corpus):
    corpus, _, _ = ppm_corpus(n=4)
    names = [name for name, _ in scan_corpus(corpus)]
    assert names == sorted(names)


def test_load_friends_file(tmp_path, ppm_corpus):
    corpus, _, tags = ppm_corpus(n=3)
    friends_file = tmp_path / "friends.json"
    friends_file.write_text(
        "["
        + ",".join(
            f'{{"friend_name": "{t["friend_name"]}", "photo_id": "{t["photo_id"]}",'
            f' "photo_path": "{t["photo_path"]}"}}'
            for t in tags
        )
        + "]"
    )
    friends = load_friends_file(friends_file)
    assert [name for name, _ in friends] == [t["friend_name"] for t in tags]

    friends_file.write_text('[{"friend_name": "x"}]')
    with pytest.raises(FormatError):
        load_friends_file(friends_file)
