import numpy as np
import pytest


@pytest.fixture
def multiset_distance():
    """Greedy bottleneck distance between two complex multisets."""

    def _distance(a, b) -> float:
        a = np.asarray(a, dtype=complex).ravel()
        b = np.asarray(b, dtype=complex).copy().ravel()
        assert a.size == b.size
        worst = 0.0
        used = np.zeros(b.size, dtype=bool)
        for x in a:
            d = np.abs(b - x)
            d[used] = np.inf
            k = int(np.argmin(d))
            used[k] = True
            worst = max(worst, float(d[k]))
        return worst

    return _distance
