import numpy as np
import pytest

from qbsic.sic import orbit, search_fiducial


class _SicCache:
    def __init__(self):
        self._sets = {}

    def __call__(self, d):
        if d not in self._sets:
            result = search_fiducial(d, restarts=10, seed=7)
            assert result.success, f"no SIC found in d={d}"
            self._sets[d] = orbit(result.fiducial)
        return self._sets[d]


@pytest.fixture(scope="session")
def sic_for():
    """Certified SIC for a given dimension, searched once per session."""
    return _SicCache()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
