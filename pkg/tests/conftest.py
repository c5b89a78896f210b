import numpy as np
import pytest

from brouncker.domain import DomainPoint


def random_points(n, seed, s_range=(0.2, 30.0), r_range=(0.55, 6.0), predicate=None):
    """Deterministic random (s, r) pairs, optionally filtered."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        p = DomainPoint(float(rng.uniform(*s_range)), float(rng.uniform(*r_range)))
        if predicate is None or predicate(p):
            out.append(p)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
