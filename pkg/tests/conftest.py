import numpy as np
import pytest

import topoaug


@pytest.fixture
def field_1x7():
    return topoaug.load_grid_field([0, 1, 2, 1, 0, 1, 2])


@pytest.fixture
def ramp8():
    return topoaug.load_grid_field(np.add.outer(np.arange(8.0), np.arange(8.0)))


def two_bump_values(side=32, c1=(10, 10), c2=(22, 22), width=40.0):
    x, y = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    return np.exp(-((x - c1[0]) ** 2 + (y - c1[1]) ** 2) / width) + np.exp(
        -((x - c2[0]) ** 2 + (y - c2[1]) ** 2) / width
    )


@pytest.fixture
def two_bump():
    return topoaug.load_grid_field(two_bump_values())


def random_field(rng, shape):
    return topoaug.load_grid_field(rng.random(shape))
