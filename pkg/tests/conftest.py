import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from changkit.cube import make_set  # noqa: E402


@pytest.fixture
def parity_set():
    """{(+,+), (-,-)} in {+1,-1}^2."""
    return make_set(2, [0, 3])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
