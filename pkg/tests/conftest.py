import numpy as np
import pytest

from normdescent.core.logging import configure_logging
from normdescent.core.rng import SeedStream


@pytest.fixture(scope="session", autouse=True)
def _configure_logging():
    configure_logging("WARNING")


@pytest.fixture
def rng(request) -> np.random.Generator:
    """A generator seeded from the test's own name."""
    return SeedStream(0).child("tests").generator(request.node.name)


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "runs"
    path.mkdir()
    return path


@pytest.fixture
def matrix_csv(tmp_path):
    """Write a matrix to a headerless CSV and return its path."""

    def write(rows, name="m.csv"):
        path = tmp_path / name
        path.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in rows) + "\n")
        return path

    return write
