import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wikilead.corpus import DatasetExample, load_examples  # noqa: E402


def fixture_path() -> Path:
    return Path(str(resources.files("wikilead") / "data" / "synthetic_fixture.jsonl"))


@pytest.fixture(scope="session")
def fixture_examples():
    return load_examples(fixture_path())


def words(n, stem="w"):
    return " ".join(f"{stem}{i}" for i in range(n))


@pytest.fixture
def small_example():
    # unit 0 mentions both title words, unit 1 neither, unit 2 one of them
    return DatasetExample(
        title="Santos Dumont",
        summary="alberto santos dumont foi um aeronauta e inventor brasileiro.",
        docs=[
            "Alberto Santos Dumont foi um aeronauta. Ele nasceu em palmira.",
            "O porto recebe navios. A cidade cresce.",
            "Dumont voou em paris. O balão subiu alto.",
        ],
    )
