import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import phi, rho, set_sum
from szccs.corr import (
    CorrelationProfile,
    aperiodic_ccf,
    aperiodic_profile,
    full_profile,
    is_zero,
    periodic_ccf,
    periodic_profiles,
    set_ccf_sum,
    set_profiles,
)
from szccs.gbf import UnimodularSequence


def qseq(q, L, rng):
    return UnimodularSequence(q, rng.integers(0, q, L)).complex()


@st.composite
def pairs(draw, max_L=40, qs=(2, 4, 6, 8)):
    q = draw(st.sampled_from(qs))
    L = draw(st.integers(1, max_L))
    e = draw(st.lists(st.integers(0, q - 1), min_size=2 * L, max_size=2 * L))
    return UnimodularSequence(q, e[:L]), UnimodularSequence(q, e[L:])


def test_two_term_examples():
    a, b = [1, 1], [1, -1]
    assert aperiodic_ccf(a, b, 0) == 0
    assert aperiodic_ccf(a, b, 1) == -1
    assert aperiodic_ccf(a, b, 2) == 0 and aperiodic_ccf(a, b, -5) == 0


def test_energy_at_zero_shift():
    rng = np.random.default_rng(0)
    a = qseq(8, 13, rng)
    assert aperiodic_ccf(a, a, 0) == pytest.approx(13)


def test_quaternary_length8_against_double_loop():
    rng = np.random.default_rng(1)
    a, b = qseq(4, 8, rng), qseq(4, 8, rng)
    for u in range(-8, 9):
        assert aperiodic_ccf(a, b, u) == pytest.approx(rho(list(a), list(b), u), abs=1e-12)


def test_periodic_examples():
    assert all(periodic_ccf([1] * 4, [1] * 4, u) == 4 for u in range(-3, 8))
    a = [1, -1, 1, -1]
    assert periodic_ccf(a, a, 1) == -4


def test_length_mismatch():
    with pytest.raises(ValueError):
        aperiodic_ccf([1, 1], [1, 1, 1], 0)
    with pytest.raises(ValueError):
        periodic_ccf([1], [1, 1], 0)
    with pytest.raises(ValueError):
        set_ccf_sum([[1, 1]], [[1, 1], [1, 1]], 0)


def test_set_sum_smallest_gcp():
    A = [[1, 1], [1, -1]]
    assert set_ccf_sum(A, A, 1) == 0
    assert set_ccf_sum(A, A, 0) == 4


@settings(max_examples=150, deadline=None)
@given(pairs())
def test_profile_matches_double_loop(ab):
    a, b = (s.complex() for s in ab)
    L = a.size
    ref = np.array([rho(list(a), list(b), u) for u in range(-(L - 1), L)])
    for method in ("naive", "fft"):
        prof = aperiodic_profile(a, b, method)
        assert np.allclose(prof, ref, atol=1e-9 * L)


@settings(max_examples=150, deadline=None)
@given(pairs(max_L=150))
def test_conjugate_symmetry_and_magnitude(ab):
    a, b = (s.complex() for s in ab)
    L = a.size
    pab = aperiodic_profile(a, b)
    pba = aperiodic_profile(b, a)
    assert np.allclose(pab, np.conj(pba[::-1]), atol=1e-9 * L)
    assert np.all(np.abs(pab) <= L - np.abs(np.arange(-(L - 1), L)) + 1e-9)


@settings(max_examples=150, deadline=None)
@given(pairs())
def test_periodic_from_aperiodic(ab):
    a, b = (s.complex() for s in ab)
    L = a.size
    for u in range(L):
        ref = aperiodic_ccf(a, b, u) + aperiodic_ccf(a, b, u - L)
        assert periodic_ccf(a, b, u) == pytest.approx(ref, abs=1e-9 * L)
        assert periodic_ccf(a, b, u) == pytest.approx(phi(list(a), list(b), u), abs=1e-9 * L)


@settings(max_examples=100, deadline=None)
@given(pairs(max_L=200, qs=(2, 4)))
def test_exact_fft_equals_naive_bitwise(ab):
    a, b = ab
    n = aperiodic_profile(a, b, "naive")
    f = aperiodic_profile(a, b, "fft")
    assert np.array_equal(n, f)
    assert np.all(n.real == np.round(n.real))


def test_length128_binary_dual_path():
    rng = np.random.default_rng(7)
    a, b = qseq(2, 128, rng), qseq(2, 128, rng)
    assert np.max(np.abs(aperiodic_profile(a, b, "fft", exact=False) - aperiodic_profile(a, b, "naive", exact=False))) <= 1e-9 * 128


def test_full_profile():
    p = full_profile([1, 1], [1, -1])
    assert isinstance(p, CorrelationProfile)
    assert p.shift_range == (-1, 1)
    assert [p.at(u) for u in (-1, 0, 1, 5)] == [1, 0, -1, 0]
    assert p.exact
    csv = p.to_csv().splitlines()
    assert csv[0] == "shift,re,im,abs" and csv[1] == "-1,1,0,1"
    with pytest.raises(ValueError, match="zero entries"):
        full_profile([1, 1, 0], [1, 1, 1])


def test_exact_request_rejected_for_irrational_values():
    a = np.exp(2j * np.pi * np.arange(5) / 6)
    with pytest.raises(ValueError):
        aperiodic_profile(a, a, exact=True)


def test_zero_tolerance():
    assert is_zero(np.array([0.0, 1e-10, 1e-6]), 100, False).tolist() == [True, True, False]
    assert is_zero(np.array([0.0, 1e-10]), 100, True).tolist() == [True, False]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(1, 20), st.sampled_from([2, 4, 6]), st.integers(0, 2**31))
def test_set_profiles_against_oracle(K, M, L, q, seed):
    rng = np.random.default_rng(seed)
    A = np.array([[qseq(q, L, rng) for _ in range(M)] for _ in range(K)])
    for method in ("naive", "fft"):
        C, _ = set_profiles(A, method=method)
        for i in range(K):
            for j in range(K):
                for u in (-(L - 1), 0, L // 2, L - 1):
                    ref = set_sum([list(x) for x in A[i]], [list(x) for x in A[j]], u)
                    assert abs(C[i, j, u + L - 1] - ref) <= 1e-9 * L


def test_periodic_profiles_against_oracle():
    rng = np.random.default_rng(3)
    X = np.array([qseq(4, 9, rng) for _ in range(3)])
    P, ex = periodic_profiles(X)
    assert ex
    for i in range(3):
        for j in range(3):
            for u in range(9):
                assert P[i, j, u] == pytest.approx(phi(list(X[i]), list(X[j]), u))
