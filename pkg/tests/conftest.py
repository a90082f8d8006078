from __future__ import annotations

import os
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def seed() -> int:
    return int(os.environ.get("PDG_SEED", "20240917"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(seed())
