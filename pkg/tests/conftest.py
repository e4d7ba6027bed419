import random
from fractions import Fraction

import pytest

# One line per acceptance criterion, printed in the terminal summary so the
# pass/fail record survives output capturing.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def rand_rat(rng: random.Random, max_num: int = 64, max_den: int = 16) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


@pytest.fixture
def rng():
    return random.Random(0)
