import json
import random
from pathlib import Path

import pytest

from cluster_forge.quiver import ExchangeMatrix, find_symmetrizer

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> dict:
    with open(FIXTURES / f"{name}.json") as fh:
        return json.load(fh)


@pytest.fixture
def fixture_path():
    def path(name: str) -> str:
        return str(FIXTURES / f"{name}.json")
    return path


def random_skew_symmetric(rng: random.Random, n: int, bound: int = 2) -> ExchangeMatrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-bound, bound)
            rows[i][j] = v
            rows[j][i] = -v
    return ExchangeMatrix(rows)


def random_skew_symmetrizable(rng: random.Random, n: int, bound: int = 2,
                              tries: int = 60) -> ExchangeMatrix:
    """Random valued quiver; falls back to skew-symmetric when sampling fails."""
    for _ in range(tries):
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.35:
                    continue
                p = rng.randint(1, bound)
                q = rng.randint(1, bound)
                if rng.random() < 0.5:
                    rows[i][j], rows[j][i] = p, -q
                else:
                    rows[i][j], rows[j][i] = -p, q
        if find_symmetrizer(rows) is not None:
            return ExchangeMatrix(rows)
    return random_skew_symmetric(rng, n, bound)
