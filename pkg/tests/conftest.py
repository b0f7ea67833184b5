import numpy as np
import pytest

from peristalsim import default_config


@pytest.fixture
def config():
    return default_config()


def measure_lag(ref, other, dt, max_lag):
    """Lag of `other` relative to `ref` by discrete cross-correlation.

    Positive result means `other` trails `ref`.  Search is limited to
    |lag| <= max_lag to keep finite-window edge effects out.
    """
    a = np.asarray(ref, dtype=float)
    b = np.asarray(other, dtype=float)
    a = a - a.mean()
    b = b - b.mean()
    n = len(a)
    m = int(round(max_lag / dt))
    xc = np.correlate(b, a, mode="full")
    counts = np.concatenate([np.arange(1, n + 1), np.arange(n - 1, 0, -1)])
    center = n - 1
    window = xc[center - m:center + m + 1] / counts[center - m:center + m + 1]
    return (int(np.argmax(window)) - m) * dt
