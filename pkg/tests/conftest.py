import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pivotal import BINARY, ExplicitDist

F = Fraction


@pytest.fixture
def even_parity3() -> ExplicitDist:
    """Uniform on the four even-parity strings of length 3."""
    quarter = F(1, 4)
    return ExplicitDist(BINARY, 3, [
        ((0, 0, 0), quarter),
        ((0, 1, 1), quarter),
        ((1, 0, 1), quarter),
        ((1, 1, 0), quarter),
    ])
