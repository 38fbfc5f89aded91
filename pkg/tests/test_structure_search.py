import numpy as np
import pytest

from conftest import fft_oracle, random_set
from fuglede_lp import (
    GroupSet,
    SearchBudget,
    check_spectral_pair,
    exhaustive_fuglede_check,
    find_spectrum,
    is_tile,
    spectrum_of_tile,
    tiles_with,
    verify_charspec,
)
from fuglede_lp.structure_search import INCONCLUSIVE, NO, YES

E = GroupSet.from_elements


def test_spectrum_examples():
    H = GroupSet.plane(3, (0, 0, 1))
    out = find_spectrum(H)
    assert out.status == YES and len(out.witness) == 9 and check_spectral_pair(H, out.witness)
    assert find_spectrum(E(3, [(1, 2, 0)])).witness == E(3, [(0, 0, 0)])
    A = E(2, [(0, 0, 0), (0, 0, 1)])
    # lexicographically least spectrum
    assert find_spectrum(A).witness == A


def test_tile_examples():
    L = GroupSet.line(3, (0, 0, 1))
    out = is_tile(L)
    assert out.status == YES and len(out.witness) == 9 and tiles_with(L, out.witness)
    assert is_tile(E(3, [(0, 0, 0), (1, 0, 0)])).status == NO  # 2 does not divide 27
    A = E(2, [(0, 0, 0), (0, 0, 1)])
    T = E(2, [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)])
    assert tiles_with(A, T)
    assert is_tile(A).witness == T


def test_witnesses_revalidate(rng):
    for p in (2, 3):
        for _ in range(30):
            A = random_set(p, rng, int(rng.integers(1, p ** 3 + 1)))
            s, t = find_spectrum(A), is_tile(A)
            if s.status == YES:
                assert check_spectral_pair(A, s.witness) and s.witness.mask[0]
            if t.status == YES:
                assert tiles_with(A, t.witness)


def test_budget_gives_inconclusive():
    H = GroupSet.plane(5, (1, 2, 3))
    assert find_spectrum(H, SearchBudget(max_nodes=3)).status == INCONCLUSIVE
    A = GroupSet.line(5, (1, 0, 0)).translate((0, 1, 0))
    assert is_tile(GroupSet.plane(5, (1, 1, 1)), SearchBudget(max_nodes=2)).status == INCONCLUSIVE
    assert is_tile(A, SearchBudget(max_nodes=10 ** 6)).status == YES
    with pytest.raises(ValueError):
        SearchBudget(0, 1.0)
    with pytest.raises(ValueError):
        SearchBudget(10, -1)


def test_invariance_under_translation_and_dilation(rng):
    found = 0
    for _ in range(40):
        A = random_set(3, rng, 3)
        s = find_spectrum(A).status
        g = tuple(int(v) for v in rng.integers(0, 3, 3))
        assert find_spectrum(A.translate(g)).status == s
        assert find_spectrum(A.dilate(2)).status == s
        assert is_tile(A.translate(g)).status == is_tile(A).status
        found += s == YES
    assert found > 0


def test_spectral_sizes_divisible_by_p(rng):
    for p in (2, 3):
        for _ in range(60):
            A = random_set(p, rng, int(rng.integers(2, p ** 3)))
            if find_spectrum(A).status == YES:
                assert len(A) % p == 0


def test_tiling_pairs_have_disjoint_fourier_support(rng):
    for p in (2, 3):
        for _ in range(20):
            A = random_set(p, rng, p)
            out = is_tile(A)
            if out.status != YES:
                continue
            fa = np.abs(fft_oracle(A.mask, p)) > 1e-9
            ft = np.abs(fft_oracle(out.witness.mask, p)) > 1e-9
            both = np.flatnonzero(fa & ft)
            assert list(both) == [0]


def test_spectrum_of_tile_examples():
    L = GroupSet.line(3, (0, 0, 1))
    assert spectrum_of_tile(L, GroupSet.plane(3, (0, 0, 1))) == L
    H = GroupSet.plane(3, (0, 0, 1))
    B = spectrum_of_tile(H, L)
    assert B == H and check_spectral_pair(H, B)
    for p in (3, 5):
        for d in [(1, 0, 0), (1, 2, 1), (0, 1, 1)]:
            A = GroupSet.line(p, d)
            T = is_tile(A).witness
            B = spectrum_of_tile(A, T)
            assert len(B) == p and check_spectral_pair(A, B)


def test_spectrum_of_tile_errors():
    L = GroupSet.line(3, (0, 0, 1))
    with pytest.raises(ValueError):
        spectrum_of_tile(L, GroupSet.line(3, (1, 0, 0)))
    with pytest.raises(ValueError):
        spectrum_of_tile(GroupSet.full(3), E(3, [(0, 0, 0)]))


def test_charspec_examples(rng):
    A = random_set(3, rng, 7)
    r = verify_charspec(A)
    assert not r.divisible and not r.charspec_ok and r.certified_non_spectral
    r = verify_charspec(GroupSet.full(5))
    assert r.trivial and r.charspec_ok and not r.certified_non_spectral
    six = E(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 1, 2)])
    r = verify_charspec(six)
    assert r.k == 2 and r.zero_set_blocking and r.charspec_ok
    # charspec is only necessary: this set has no spectrum (6 lies in the excluded window)
    assert r.threshold_excluded and find_spectrum(six).status == NO


def test_charspec_for_size_2p_in_z5():
    A = GroupSet.from_indices(5, np.concatenate([GroupSet.line(5, (0, 0, 1)).indices(),
                                                 GroupSet.line(5, (0, 0, 1)).translate((1, 0, 0)).indices()]))
    r = verify_charspec(A)
    assert r.k == 2
    if find_spectrum(A, SearchBudget(200_000, 20)).status == YES:
        assert r.zero_set_blocking


def test_exhaustive_p2():
    rep = exhaustive_fuglede_check(2)
    assert len(rep.rows) == 256 and not rep.discrepancies and not rep.inconclusive
    for set_id, size, spectral, tile in rep.rows:
        if size == 3:
            assert spectral == NO and tile == NO
        if size in (0, 8):
            assert spectral == YES and tile == YES
    assert rep.to_csv().splitlines()[0] == "set-id,size,spectral,tile"


def test_exhaustive_p3_sampled():
    rep = exhaustive_fuglede_check(3, samples=60, seed=3)
    assert len(rep.rows) == 26 + 60
    assert not rep.discrepancies


def test_exhaustive_rejects_large_p():
    with pytest.raises(ValueError):
        exhaustive_fuglede_check(5)
