import numpy as np
import pytest
from hypothesis import settings

from fuglede_lp import GroupSet
from fuglede_lp._field import tables

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def fft_oracle(values, p):
    """Transform via numpy's FFT: flat index x1 + p x2 + p^2 x3 is C order (x3, x2, x1)."""
    cube = np.asarray(values, dtype=complex).reshape(p, p, p)
    return np.fft.fftn(cube).reshape(-1)


def random_set(p, rng, size=None):
    N = p ** 3
    if size is None:
        size = int(rng.integers(0, N + 1))
    return GroupSet.from_indices(p, rng.choice(N, size, replace=False))


def random_balanced_values(p, rng, lo=-5, hi=6):
    """Integer function on Z_p^3 constant on punctured lines, as Python ints."""
    t = tables(p)
    vals = [int(v) for v in rng.integers(lo, hi, len(t.proj_points) + 1)]
    return np.array(vals, dtype=object)[t.proj_index]


def is_subgroup(A):
    idx = A.indices()
    if 0 not in idx:
        return False
    sums = tables(A.p).add[np.ix_(idx, idx)]
    return bool(A.mask[sums].all())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
