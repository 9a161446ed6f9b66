from __future__ import annotations

import numpy as np
import pytest

from eqwalk import code_from_generator, transition_from_graph

import oracles


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def hamming74():
    return code_from_generator(oracles.HAMMING74_ROWS, 2)


@pytest.fixture(scope="session")
def petersen_walk():
    return transition_from_graph(oracles.petersen_edges(), 10)
