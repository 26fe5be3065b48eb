import numpy as np
import pytest

from nahmkit.moduli import HiggsData, InfinityGroup, LogPoint, WeightedEigen


@pytest.fixture
def t1():
    """Rank-2 degree -1 datum with two punctures and two infinity groups."""
    return HiggsData(
        2,
        -1,
        (
            LogPoint(0.0, (WeightedEigen(0.0, 0.0), WeightedEigen(0.3, 0.25))),
            LogPoint(1.0, (WeightedEigen(0.0, 0.0), WeightedEigen(-0.2 + 0.1j, 0.6))),
        ),
        (
            InfinityGroup(2.0, (WeightedEigen(0.5, 0.4),)),
            InfinityGroup(-1 + 1j, (WeightedEigen(-0.35, 0.7),)),
        ),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
