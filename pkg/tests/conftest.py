import json

import numpy as np
import pytest

from gridlock._kernels import warmup
from gridlock.bootstrap.ppm import write_ppm
from gridlock.observer import synthetic_image_ids, synthetic_registration


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Pay any JIT compilation cost once, before timed tests run."""
    return warmup()


@pytest.fixture
def image_ids():
    return synthetic_image_ids()


@pytest.fixture
def registration():
    return synthetic_registration(99)


@pytest.fixture
def ppm_corpus(tmp_path):
    """Factory for a photo directory with face sidecars plus a tag manifest.

    Sidecars carry two boxes so detector-driven extraction exercises its
    first-box rule; the manifest tags the same first box, making the two
    bootstrap modes produce identical crops.
    """

    def build(n=6, missing_faces=(), bad_photos=(), size=(24, 32)):
        corpus = tmp_path / "corpus"
        corpus.mkdir(exist_ok=True)
        rng = np.random.default_rng(1234)
        tags = []
        for i in range(n):
            name = f"friend-{i:02d}"
            path = corpus / f"{name}.ppm"
            if name in bad_photos:
                path.write_bytes(b"P6 not really a ppm")
            else:
                write_ppm(path, rng.integers(0, 256, (*size, 3), dtype=np.uint8))
            box = {"x": 3 + (i % 5), "y": 2, "w": 10, "h": 8}
            second = {"x": 0, "y": 0, "w": 4, "h": 4}
            if name not in missing_faces:
                sidecar = corpus / f"{name}.ppm.faces.json"
                sidecar.write_text(json.dumps([box, second]))
                tags.append(
                    {
                        "photo_id": name,
                        "photo_path": str(path),
                        "friend_name": name,
                        "box": box,
                    }
                )
        manifest = tmp_path / "tags.json"
        manifest.write_text(json.dumps(tags))
        return corpus, manifest, tags

    return build
