import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from icpricing.instance import TransactionDataset

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def example_one() -> TransactionDataset:
    """Three customers, two products; the optimal closure revenue is 4."""
    return TransactionDataset.from_rows([[1, 2], [2, 3], [1, 3]], [1, 2, 1], one_based=True)


def random_instance(rng: np.random.Generator, m: int, n: int, low: float = 0.0, high: float = 10.0) -> TransactionDataset:
    P = rng.uniform(low, high, (m, n))
    P[P <= 0] = 1e-3
    return TransactionDataset(P, rng.integers(0, n, m))


@pytest.fixture
def ex1() -> TransactionDataset:
    return example_one()


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
