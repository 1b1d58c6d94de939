import numpy as np
import pytest

from ids_lexicase.core import SolveMatrix

# Six individuals on five cases; rows are case solve vectors. Cases 0 and 4
# are synonymous, case 2 is distant from everything.
EXAMPLE_SOLVES = np.array(
    [
        [0, 1, 0, 1, 1, 0],
        [1, 1, 0, 0, 1, 1],
        [1, 0, 1, 1, 0, 1],
        [0, 1, 0, 0, 1, 1],
        [0, 1, 0, 1, 1, 0],
    ],
    dtype=np.uint8,
)

EXAMPLE_DISTANCES = np.array(
    [
        [0, 3, 5, 2, 0],
        [3, 0, 4, 1, 3],
        [5, 4, 0, 5, 5],
        [2, 1, 5, 0, 2],
        [0, 3, 5, 2, 0],
    ],
    dtype=np.int64,
)


@pytest.fixture
def example_solves() -> SolveMatrix:
    return SolveMatrix(EXAMPLE_SOLVES.copy())
