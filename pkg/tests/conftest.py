import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gljunction import DiskInDisk, Params  # noqa: E402


@pytest.fixture
def unit_params():
    return Params(1.0, 1.0, 0.05)


@pytest.fixture
def disk12():
    return DiskInDisk(1.0, 2.0)
