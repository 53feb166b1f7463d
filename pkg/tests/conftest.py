from fractions import Fraction as F

import pytest

from pavelka import Structure, Vocabulary


@pytest.fixture
def vocab_pc():
    return Vocabulary({"P": 1}, {"c": 0})


@pytest.fixture
def m2():
    """Two points at distance 1 with P = 1/3, 1 and the constant at a."""
    return Structure(
        ("a", "b"),
        {("a", "b"): F(1)},
        {"P": {("a",): F(1, 3), ("b",): F(1)}},
        {},
        {"c": "a"},
    )


@pytest.fixture
def mod3():
    """Three points with the successor operation mod 3."""
    return Structure(
        ("e0", "e1", "e2"),
        {("e0", "e1"): F(1), ("e0", "e2"): F(1), ("e1", "e2"): F(1)},
        {},
        {"s": {("e0",): "e1", ("e1",): "e2", ("e2",): "e0"}},
        {},
    )
