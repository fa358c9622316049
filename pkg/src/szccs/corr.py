"""
Aperiodic and periodic correlation of sequences and sequence sets.

Convention: ``rho_{a,b}(u) = sum_i a(i) * conj(b(i + u))``.  Profiles are
indexed by shift ``u = -(L-1), ..., L-1``; array position ``u + L - 1``.

Two evaluation paths exist: a direct sum (``naive``) and zero-padded FFT
(``fft``).  When every input value is a Gaussian integer the result is
integral; in that *exact* mode FFT output is rounded to the nearest Gaussian
integer, so both paths return identical values and zero tests are exact.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .gbf import UnimodularSequence

__all__ = [
    "FFT_CROSSOVER",
    "CorrelationProfile",
    "as_values",
    "is_gaussian_integer",
    "zero_tolerance",
    "is_zero",
    "aperiodic_ccf",
    "periodic_ccf",
    "set_ccf_sum",
    "aperiodic_profile",
    "full_profile",
    "set_profiles",
    "periodic_profiles",
]

FFT_CROSSOVER = 64
_ROUND_GUARD = 0.25


def as_values(x) -> np.ndarray:
    if isinstance(x, UnimodularSequence):
        return x.complex()
    return np.asarray(x, dtype=complex)


def is_gaussian_integer(values: np.ndarray) -> bool:
    v = np.asarray(values)
    if not np.iscomplexobj(v):
        v = v.astype(complex)
    return bool(
        np.all(v.real == np.round(v.real))
        and np.all(v.imag == np.round(v.imag))
        and np.all(np.abs(v) < 2**40)
    )


def zero_tolerance(L: int, exact: bool) -> float:
    return 0.0 if exact else 1e-9 * L


def is_zero(values, L: int, exact: bool) -> np.ndarray:
    """Elementwise zero test: exact equality, or ``|v| <= 1e-9 * L``."""
    return np.abs(np.asarray(values)) <= zero_tolerance(L, exact)


def _resolve_exact(values: np.ndarray, exact: bool | None) -> bool:
    auto = is_gaussian_integer(values)
    if exact is None:
        return auto
    if exact and not auto:
        raise ValueError("exact mode requested for non-Gaussian-integer input")
    return bool(exact)


def _round_exact(c: np.ndarray) -> np.ndarray:
    r = np.round(c.real) + 1j * np.round(c.imag)
    err = np.max(np.abs(c - r), initial=0.0)
    if err > _ROUND_GUARD:
        raise ArithmeticError(f"FFT rounding residual {err:.3g} too large for exact mode")
    return r


def _pair(a, b):
    a, b = as_values(a), as_values(b)
    if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
        raise ValueError(f"sequences must be 1-D of equal length, got {a.shape} and {b.shape}")
    if a.size < 1:
        raise ValueError("sequences must have length >= 1")
    return a, b


def aperiodic_ccf(a, b, u: int) -> complex:
    """``rho_{a,b}(u)``; zero for ``|u| >= L``."""
    a, b = _pair(a, b)
    L = a.size
    u = int(u)
    if abs(u) >= L:
        return 0j
    if u >= 0:
        return complex(np.sum(a[: L - u] * np.conj(b[u:])))
    return complex(np.sum(a[-u:] * np.conj(b[: L + u])))


def periodic_ccf(a, b, u: int) -> complex:
    """``phi_{a,b}(u) = sum_i a(i) conj(b((i + u) mod L))``."""
    a, b = _pair(a, b)
    return complex(np.sum(a * np.conj(np.roll(b, -(int(u) % a.size)))))


def set_ccf_sum(A, B, u: int) -> complex:
    """``C_{A,B}(u)``: sum of member-wise aperiodic correlations."""
    if len(A) != len(B):
        raise ValueError(f"set sizes differ: {len(A)} != {len(B)}")
    if len(A) == 0:
        raise ValueError("empty sequence sets")
    return sum((aperiodic_ccf(x, y, u) for x, y in zip(A, B)), 0j)


def _profile_naive(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # np.correlate(b, a)[t] = conj(rho_{a,b}(t - L + 1))
    return np.conj(np.correlate(b, a, mode="full"))


def _profile_fft(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    L = a.shape[-1]
    n = 1 << int(np.ceil(np.log2(2 * L - 1)))
    c = np.fft.ifft(np.fft.fft(a, n) * np.conj(np.fft.fft(b, n)), n)
    # c[k] = rho_{a,b}(-k mod n)
    idx = (-np.arange(-(L - 1), L)) % n
    return c[..., idx]


def aperiodic_profile(a, b, method: str = "auto", exact: bool | None = None) -> np.ndarray:
    """All shifts ``-(L-1)..L-1`` of ``rho_{a,b}`` as a complex array."""
    a, b = _pair(a, b)
    L = a.size
    ex = _resolve_exact(np.concatenate([a, b]), exact)
    if method == "auto":
        method = "fft" if L > FFT_CROSSOVER else "naive"
    if method == "naive":
        out = _profile_naive(a, b)
    elif method == "fft":
        out = _profile_fft(a, b)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _round_exact(out) if ex else out


@dataclass(frozen=True)
class CorrelationProfile:
    """Correlation values over a contiguous shift range."""

    values: np.ndarray
    shift_range: tuple[int, int]
    exact: bool = False

    @property
    def shifts(self) -> np.ndarray:
        return np.arange(self.shift_range[0], self.shift_range[1] + 1)

    def at(self, u: int) -> complex:
        lo, hi = self.shift_range
        if not lo <= u <= hi:
            return 0j
        return complex(self.values[u - lo])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["shift", "re", "im", "abs"])
        for u, v in zip(self.shifts, self.values):
            w.writerow([int(u), _fmt(v.real), _fmt(v.imag), _fmt(abs(v))])
        return buf.getvalue()


def _fmt(x: float) -> str:
    x = float(x)
    return str(int(x)) if x == int(x) and abs(x) < 2**53 else repr(x)


def full_profile(a, b, method: str = "auto", exact: bool | None = None) -> CorrelationProfile:
    """
    Full aperiodic correlation profile of two unimodular sequences.

    Zero entries are rejected: a zero-padded input is a different sequence,
    not the same sequence with a different length.
    """
    a, b = _pair(a, b)
    if np.any(a == 0) or np.any(b == 0):
        raise ValueError("zero entries are not allowed in unimodular sequences")
    ex = _resolve_exact(np.concatenate([a, b]), exact)
    L = a.size
    return CorrelationProfile(aperiodic_profile(a, b, method, ex), (-(L - 1), L - 1), ex)


def set_profiles(A, B=None, method: str = "auto", exact: bool | None = None):
    """
    Correlation sums between every pair of codes.

    ``A`` has shape ``(K, M, L)`` (K codes of M sequences).  Returns
    ``(C, exact)`` where ``C[i, j, u + L - 1] = C_{A_i, B_j}(u)``.
    """
    A = np.asarray(A, dtype=complex)
    B = A if B is None else np.asarray(B, dtype=complex)
    if A.ndim != 3 or B.ndim != 3 or A.shape[1:] != B.shape[1:]:
        raise ValueError(f"incompatible code arrays {A.shape} and {B.shape}")
    L = A.shape[2]
    ex = _resolve_exact(np.concatenate([A.ravel(), B.ravel()]), exact)
    if method == "auto":
        method = "fft" if L > FFT_CROSSOVER else "naive"
    if method == "naive":
        C = np.zeros((A.shape[0], B.shape[0], 2 * L - 1), dtype=complex)
        for i in range(A.shape[0]):
            for j in range(B.shape[0]):
                for m in range(A.shape[1]):
                    C[i, j] += _profile_naive(A[i, m], B[j, m])
    elif method == "fft":
        n = 1 << int(np.ceil(np.log2(2 * L - 1)))
        FA = np.fft.fft(A, n)
        FB = np.fft.fft(B, n)
        c = np.fft.ifft(np.einsum("imn,jmn->ijn", FA, np.conj(FB)), n)
        C = c[..., (-np.arange(-(L - 1), L)) % n]
    else:
        raise ValueError(f"unknown method {method!r}")
    return (_round_exact(C) if ex else C), ex


def periodic_profiles(rows, exact: bool | None = None):
    """
    Periodic cross-correlation of every pair of rows.

    Returns ``(P, exact)`` with ``P[i, j, u] = phi_{x_i, x_j}(u)``, ``u = 0..L-1``.
    """
    X = np.asarray(rows, dtype=complex)
    ex = _resolve_exact(X, exact)
    F = np.fft.fft(X, axis=-1)
    c = np.fft.ifft(F[:, None, :] * np.conj(F[None, :, :]), axis=-1)
    L = X.shape[-1]
    P = c[..., (-np.arange(L)) % L]
    return (_round_exact(P) if ex else P), ex
