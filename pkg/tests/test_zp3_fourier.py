from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import fft_oracle, random_balanced_values, random_set
from fuglede_lp import (
    GroupFunction,
    GroupSet,
    balance_symmetrize,
    check_spectral_pair,
    convolve,
    fourier_transform,
    inverse_transform,
    level_counts,
    trace_weight,
    zero_set,
)
from fuglede_lp._field import canonical, index_of, point_of, tables
from fuglede_lp.zp3_fourier import zero_set_mask

PRIMES = [2, 3, 5, 7]


def test_set_json_reduces_coordinates():
    A = GroupSet.from_json('{"p": 3, "elements": [[0,0,0],[3,4,-1]]}')
    assert A.elements() == [(0, 0, 0), (0, 1, 2)]
    assert GroupSet.from_json(A.to_json()) == A


@pytest.mark.parametrize("bad", ['{"p": 4, "elements": []}', '{"elements": []}', '{"p": 3, "elements": [[1,2]]}'])
def test_set_json_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        GroupSet.from_json(bad)


def test_index_round_trip():
    for p in PRIMES:
        for i in range(p ** 3):
            assert index_of(point_of(i, p), p) == i


def test_delta_and_constant_transforms():
    for p in (2, 3, 5):
        one = fourier_transform(GroupFunction.delta(p))
        assert one.exact and all(v == 1 for v in one.values)
        spike = fourier_transform(GroupFunction.constant(p, 1))
        assert spike.exact and spike.values[0] == p ** 3 and not any(spike.values[1:])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_transform_matches_numpy_fft(p, rng):
    for _ in range(5):
        vals = rng.normal(size=p ** 3) + 1j * rng.normal(size=p ** 3)
        f = GroupFunction(p, vals)
        assert np.allclose(fourier_transform(f).values, fft_oracle(vals, p), atol=1e-9)
        A = random_set(p, rng)
        assert np.allclose(fourier_transform(A.indicator()).as_complex(), fft_oracle(A.mask, p), atol=1e-9)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_exact_path_matches_fft_on_balanced(p, rng):
    vals = random_balanced_values(p, rng)
    ft = fourier_transform(GroupFunction(p, vals))
    assert ft.exact
    assert np.allclose(ft.as_complex(), fft_oracle(vals.astype(float), p), atol=1e-8)


@given(st.sampled_from([2, 3, 5]), st.integers(0, 2 ** 32 - 1))
def test_plancherel_and_inversion_exact(p, seed):
    rng = np.random.default_rng(seed)
    f = GroupFunction(p, random_balanced_values(p, rng))
    ft = fourier_transform(f)
    assert ft.exact
    assert p ** 3 * sum(v * v for v in f.values) == sum(v * v for v in ft.values)
    assert inverse_transform(ft).equals(f)


@given(st.sampled_from([2, 3, 5]), st.integers(0, 2 ** 32 - 1))
def test_convolution_theorem_float(p, seed):
    rng = np.random.default_rng(seed)
    f = GroupFunction(p, rng.normal(size=p ** 3) + 1j * rng.normal(size=p ** 3))
    g = GroupFunction(p, rng.normal(size=p ** 3))
    lhs = fourier_transform(convolve(f, g))
    rhs = fourier_transform(f) * fourier_transform(g)
    assert lhs.equals(rhs, tol=1e-9 * max(1.0, np.abs(rhs.values).max()))


def test_double_transform_of_even_function(rng):
    for p in (3, 5):
        vals = rng.integers(-4, 5, p ** 3)
        f = GroupFunction(p, vals + vals[tables(p).neg])
        assert f.is_even()
        twice = fourier_transform(fourier_transform(f))
        assert twice.equals(f * p ** 3, tol=1e-7)


def test_level_counts_sum_to_size(rng):
    A = random_set(5, rng, 17)
    lc = level_counts(A, (1, 2, 3))
    assert sum(lc.counts) == 17 and len(lc.counts) == 5
    with pytest.raises(ValueError):
        level_counts(A, (0, 0, 5))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_zero_set_agrees_with_float_transform(p, rng):
    for _ in range(10):
        A = random_set(p, rng, int(rng.integers(1, p ** 3)))
        ft = np.abs(fft_oracle(A.mask, p))
        zs = zero_set(A)
        for pt in tables(p).proj_points:
            assert (pt in zs) == bool(ft[index_of(pt, p)] < 1e-9)
    # sets built to have zeros: unions of cosets of a plane
    H = GroupSet.plane(p, (1, 1, 0))
    A = GroupSet.from_indices(p, np.concatenate([H.translate((1, 0, 0)).indices(), H.indices()]))
    assert canonical((0, 0, 1), p) in zero_set(A)


def test_zero_set_scaling_invariance(rng):
    for p in (3, 5, 7):
        A = random_set(p, rng)
        mask = zero_set_mask(A)
        for lam in range(2, p):
            assert np.array_equal(mask, mask[tables(p).scale[lam]])


def test_zero_set_of_axis_line():
    # the nine directions with nonzero third coordinate, i.e. not on the plane x3 = 0
    L = GroupSet.line(3, (0, 0, 1))
    zs = zero_set(L)
    assert len(zs) == 9
    assert all(pt[2] != 0 for pt in zs)


def test_spectral_pair_examples():
    A = GroupSet.from_elements(2, [(0, 0, 0), (0, 0, 1)])
    assert check_spectral_pair(A, A)
    assert not check_spectral_pair(A, GroupSet.from_elements(2, [(0, 0, 0), (1, 0, 0)]))
    assert not check_spectral_pair(A, GroupSet.from_elements(2, [(0, 0, 0)]))
    L = GroupSet.line(5, (1, 2, 3))
    assert check_spectral_pair(L, GroupSet.line(5, (1, 0, 0)))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_trace_weight_against_float(p, rng):
    A = random_set(p, rng, int(rng.integers(1, p ** 3)))
    h = trace_weight(A)
    ft = fft_oracle(A.mask, p)
    scale = tables(p).scale
    expected = sum(np.abs(ft[scale[lam]]) ** 2 for lam in range(1, p))
    assert np.allclose(h.as_complex().real, expected, atol=1e-6)
    assert h.values[0] == (p - 1) * len(A) ** 2
    assert h.is_balanced()


def test_balance_symmetrize(rng):
    p = 5
    vals = rng.integers(-3, 4, p ** 3)
    f = GroupFunction(p, vals + vals[tables(p).neg])
    b = balance_symmetrize(f)
    assert b.exact and b.is_balanced()
    assert sum(b.values) == sum(f.values)
    with pytest.raises(ValueError):
        balance_symmetrize(GroupFunction.delta(p, (1, 0, 0)))


def test_fractions_stay_exact():
    f = GroupFunction(3, np.array([Fraction(1, 3)] * 27, dtype=object))
    ft = fourier_transform(f)
    assert ft.exact and ft.values[0] == 9


def test_mismatched_moduli():
    with pytest.raises(ValueError):
        convolve(GroupFunction.delta(2), GroupFunction.delta(3))
    with pytest.raises(ValueError):
        check_spectral_pair(GroupSet.empty(2), GroupSet.empty(3))
