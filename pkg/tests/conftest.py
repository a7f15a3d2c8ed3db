"""Shared fixtures: a hand-checked 4-candidate instance and small helpers.

The sample tournament has margins a->b 4, a->c 6, b->c 10, c->d 8, d->a 2,
d->b 12 (ids 0..3 = a..d).  Every expected value asserted against it in the
suite was derived by hand from the definitions.
"""

import numpy as np
import pytest

from beatpath import WeightedTournament

SAMPLE4_EDGES = [
    (0, 1, 4),
    (0, 2, 6),
    (1, 2, 10),
    (2, 3, 8),
    (3, 0, 2),
    (3, 1, 12),
]

SAMPLE4_LABELS = ("a", "b", "c", "d")

# Hand-computed widest-path widths for the sample (row = from, col = to).
SAMPLE4_WIDEST = np.array(
    [
        [0, 6, 6, 6],
        [2, 0, 10, 8],
        [2, 8, 0, 8],
        [2, 12, 10, 0],
    ],
    dtype=np.int64,
)


@pytest.fixture
def sample4() -> WeightedTournament:
    return WeightedTournament.from_edges(4, SAMPLE4_EDGES)


# One line per acceptance criterion, echoed after the run so the verdicts
# survive output capturing.
ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
