from __future__ import annotations

import numpy as np
import pytest

from octolct.lct1d import Grid1D, LCTParams


def rel_err(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    nb = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / nb) if nb else float(np.linalg.norm(a))


def random_lct(rng, b_range=(0.5, 2.0)) -> LCTParams:
    b = rng.uniform(*b_range) * rng.choice((-1.0, 1.0))
    a = rng.uniform(-1.5, 1.5)
    d = rng.uniform(-1.5, 1.5)
    return LCTParams(a, b, (a * d - 1.0) / b, d)


def random_triple(rng):
    return tuple(random_lct(rng) for _ in range(3))


def cube(n: int, step: float):
    return (Grid1D(n, step),) * 3


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
