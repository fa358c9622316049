"""
Code sets, their correlation verifiers, the set-size bound and the
equivalence transforms that preserve symmetric zero-correlation zones.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np

from . import corr
from .gbf import UnimodularSequence

__all__ = [
    "KINDS",
    "MAX_VIOLATIONS",
    "CodeSet",
    "VerificationReport",
    "verify_szccs",
    "verify_mocs",
    "verify_gcp",
    "zone_widths",
    "certify",
    "bound_check",
    "transform_scale",
    "transform_reverse",
]

KINDS = ("GCP", "ZCC", "ZCCS", "SZCCS", "MOCCS", "UNVERIFIED")
MAX_VIOLATIONS = 1000


@dataclass(frozen=True, eq=False)
class CodeSet:
    """
    ``K`` codes of ``M`` constituent sequences, each of length ``L``.

    Sets built from exponents keep ``q``/``exponents`` so they can be
    serialized losslessly; arbitrary complex sets carry ``values`` only.
    """

    values: np.ndarray
    q: int | None = None
    exponents: np.ndarray | None = None
    kind: str = "UNVERIFIED"
    zcz: int | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 3 or min(v.shape) < 1:
            raise ValueError(f"code array must have shape (K, M, L), got {v.shape}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.zcz is not None and self.kind in ("ZCC", "ZCCS", "SZCCS"):
            if not 1 <= self.zcz <= v.shape[2] - 1:
                raise ValueError(f"Z={self.zcz} outside [1, L-1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_exponents(cls, exponents, q: int, provenance: dict | None = None) -> "CodeSet":
        e = np.asarray(exponents, dtype=np.int64) % q
        if e.ndim != 3:
            raise ValueError(f"exponent array must have shape (K, M, L), got {e.shape}")
        vals = np.stack([
            np.stack([UnimodularSequence(q, row).complex() for row in code]) for code in e
        ])
        e.setflags(write=False)
        return cls(vals, q=int(q), exponents=e, provenance=dict(provenance or {}))

    @classmethod
    def from_sequences(cls, codes: Sequence[Sequence], provenance: dict | None = None) -> "CodeSet":
        """Build from nested lists of UnimodularSequence or complex vectors."""
        if all(isinstance(s, UnimodularSequence) for code in codes for s in code):
            qs = {s.q for code in codes for s in code}
            if len(qs) == 1:
                q = qs.pop()
                return cls.from_exponents([[s.exponents for s in code] for code in codes], q, provenance)
        vals = np.array([[corr.as_values(s) for s in code] for code in codes])
        return cls(vals, provenance=dict(provenance or {}))

    @property
    def K(self) -> int:
        return self.values.shape[0]

    @property
    def M(self) -> int:
        return self.values.shape[1]

    @property
    def L(self) -> int:
        return self.values.shape[2]

    @property
    def params(self) -> tuple[int, int, int, int | None]:
        return (self.K, self.M, self.L, self.zcz)

    @property
    def exact(self) -> bool:
        return corr.is_gaussian_integer(self.values)

    def sequence(self, k: int, m: int):
        if self.exponents is not None:
            return UnimodularSequence(self.q, self.exponents[k, m])
        return self.values[k, m].copy()

    def select(self, codes: Sequence[int]) -> "CodeSet":
        idx = list(codes)
        prov = dict(self.provenance, selected_codes=idx)
        exps = None if self.exponents is None else self.exponents[idx]
        return CodeSet(self.values[idx], self.q, exps, provenance=prov)

    def __eq__(self, other):
        if not isinstance(other, CodeSet):
            return NotImplemented
        return self.values.shape == other.values.shape and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        K, M, L, Z = self.params
        doc: dict[str, Any] = {
            "params": {"K": K, "M": M, "L": L, "Z": Z},
            "kind": self.kind,
            "provenance": self.provenance,
        }
        if self.exponents is not None:
            doc["q"] = self.q
            doc["codes"] = self.exponents.tolist()
        else:
            doc["q"] = None
            doc["codes"] = [[[[float(z.real), float(z.imag)] for z in s] for s in code] for code in self.values]
        return doc

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: dict) -> "CodeSet":
        try:
            codes = doc["codes"]
            q = doc.get("q")
        except (KeyError, TypeError) as exc:
            raise ValueError("code set document needs a 'codes' array") from exc
        if q is not None:
            out = cls.from_exponents(codes, int(q), doc.get("provenance"))
        else:
            arr = np.asarray(codes, dtype=float)
            if arr.ndim != 4 or arr.shape[-1] != 2:
                raise ValueError("complex codes must be [K][M][L][re, im]")
            out = cls(arr[..., 0] + 1j * arr[..., 1], provenance=doc.get("provenance") or {})
        params = doc.get("params") or {}
        for key, val in (("K", out.K), ("M", out.M), ("L", out.L)):
            if key in params and params[key] != val:
                raise ValueError(f"declared {key}={params[key]} disagrees with data ({val})")
        kind = doc.get("kind", "UNVERIFIED")
        return replace(out, kind=kind, zcz=params.get("Z")) if kind != "UNVERIFIED" else out

    @classmethod
    def from_json(cls, text: str) -> "CodeSet":
        return cls.from_dict(json.loads(text))


@dataclass
class VerificationReport:
    verdict: bool
    Z: int | None
    zcz_front: int
    zcz_tail: int
    max_symmetric_z: int
    violations: list = field(default_factory=list)
    n_violations: int = 0
    optimal: bool = False
    bound: int | None = None
    exact: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "Z": self.Z,
            "zcz_front": self.zcz_front,
            "zcz_tail": self.zcz_tail,
            "max_symmetric_z": self.max_symmetric_z,
            "optimal": self.optimal,
            "bound": self.bound,
            "exact": self.exact,
            "n_violations": self.n_violations,
            "violations": [
                {"codes": [i, j], "shift": u, "re": v.real, "im": v.imag, "abs": abs(v)}
                for i, j, u, v in self.violations
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _code_array(S) -> np.ndarray:
    if isinstance(S, CodeSet):
        return S.values
    return np.asarray([[corr.as_values(s) for s in code] for code in S])


def _offdiag_mask(K: int, L: int) -> np.ndarray:
    """Mask of entries that must vanish, indexed like set_profiles output."""
    mask = np.ones((K, K, 2 * L - 1), dtype=bool)
    mask[np.arange(K), np.arange(K), L - 1] = False  # in-phase auto-correlation
    return mask


def zone_widths(C: np.ndarray, L: int, exact: bool) -> tuple[int, int, bool]:
    """
    Front and tail zone widths of a correlation-sum tensor.

    Returns ``(front, tail, zero_ok)`` where ``front`` is the largest Z with
    all sums vanishing on ``1 <= |u| <= Z``, ``tail`` the largest Z with all
    sums vanishing on ``L-Z <= |u| <= L-1``, and ``zero_ok`` says whether
    every cross sum vanishes at ``u = 0``.
    """
    K = C.shape[0]
    nz = ~corr.is_zero(C, L, exact) & _offdiag_mask(K, L)
    bad = nz.any(axis=(0, 1))
    bad_abs = bad[L:] | bad[: L - 1][::-1]  # index d-1 <-> |u| = d
    hits = np.flatnonzero(bad_abs)
    front = int(hits[0]) if hits.size else L - 1
    tail = int(L - 2 - hits[-1]) if hits.size else L - 1
    zero_ok = not bad[L - 1]
    return front, tail, zero_ok


def _violations(C, L, exact, shifts_abs, limit=MAX_VIOLATIONS):
    K = C.shape[0]
    shifts = np.array(sorted(shifts_abs))
    cols = shifts + L - 1  # u >= 0 suffices: C_{j,i}(-u) = conj(C_{i,j}(u))
    sub = C[:, :, cols]
    nz = ~corr.is_zero(sub, L, exact) & _offdiag_mask(K, L)[:, :, cols]
    found = np.argwhere(nz)
    out = [(int(i), int(j), int(shifts[c]), complex(sub[i, j, c])) for i, j, c in found[:limit]]
    return out, int(found.shape[0])


def verify_szccs(S, Z: int, exact: bool | None = None, method: str = "auto") -> VerificationReport:
    """
    Check the symmetric zero-correlation zone conditions at width ``Z``.

    Auto sums must vanish for ``|u|`` in ``{1..Z} U {L-Z..L-1}``; cross sums
    between distinct codes additionally at ``u = 0``.  The report also gives
    the widest front/tail zones actually present.
    """
    A = _code_array(S)
    K, M, L = A.shape
    Z = int(Z)
    if not 1 <= Z <= L - 1:
        raise ValueError(f"Z must lie in [1, L-1] = [1, {L - 1}], got {Z}")
    C, ex = corr.set_profiles(A, method=method, exact=exact)
    front, tail, zero_ok = zone_widths(C, L, ex)
    shifts = {0} | set(range(1, Z + 1)) | set(range(L - Z, L))
    viol, nviol = _violations(C, L, ex, shifts)
    bound, optimal = bound_check(K, M, L, Z)
    sym = min(front, tail) if zero_ok else 0
    return VerificationReport(
        verdict=nviol == 0,
        Z=Z,
        zcz_front=front,
        zcz_tail=tail,
        max_symmetric_z=sym,
        violations=viol,
        n_violations=nviol,
        optimal=nviol == 0 and optimal,
        bound=bound,
        exact=ex,
    )


def verify_mocs(S, exact: bool | None = None) -> VerificationReport:
    """Mutually orthogonal complementary set check via the symmetric verifier."""
    L = _code_array(S).shape[2]
    if L == 1:
        raise ValueError("MOCCS check needs L >= 2")
    return verify_szccs(S, max(1, math.ceil((L - 1) / 2)), exact=exact)


def verify_gcp(pair, exact: bool | None = None) -> VerificationReport:
    """Golay pair check: the auto-correlation sum vanishes at every nonzero shift."""
    a, b = pair
    A = np.array([[corr.as_values(a), corr.as_values(b)]])
    L = A.shape[2]
    C, ex = corr.set_profiles(A, exact=exact)
    front, tail, _ = zone_widths(C, L, ex)
    viol, nviol = _violations(C, L, ex, set(range(1, L)))
    return VerificationReport(
        verdict=nviol == 0,
        Z=L - 1,
        zcz_front=front,
        zcz_tail=tail,
        max_symmetric_z=min(front, tail),
        violations=viol,
        n_violations=nviol,
        exact=ex,
    )


def bound_check(K: int, M: int, L: int, Z: int) -> tuple[int, bool]:
    """Return ``(floor(M*L/(Z+1)), K == that bound)``."""
    if min(K, M, L, Z) < 1:
        raise ValueError("K, M, L, Z must be positive")
    if Z > L - 1:
        raise ValueError(f"Z={Z} exceeds L-1={L - 1}")
    max_k = (M * L) // (Z + 1)
    return max_k, K == max_k


def certify(S: CodeSet, Z: int | None = None, exact: bool | None = None):
    """
    Verify ``S`` and return ``(classified_set, report)``.

    With ``Z`` omitted the widest symmetric zone is used.  The returned set
    carries the kind implied by its correlation structure.
    """
    L = S.L
    if L == 1:
        return S, None
    probe = verify_szccs(S, 1 if Z is None else Z, exact=exact)
    zeff = probe.max_symmetric_z if Z is None else Z
    if Z is None and zeff >= 1:
        report = verify_szccs(S, zeff, exact=exact)
    else:
        report = probe
    kind, zval = "UNVERIFIED", None
    if S.K == 1:
        if report.zcz_front == L - 1 and S.M == 2:
            kind, zval = "GCP", L - 1
        elif report.zcz_front >= 1:
            kind, zval = "ZCC", report.zcz_front
    elif report.verdict and zeff >= 1:
        if zeff >= math.ceil((L - 1) / 2):
            kind = "MOCCS"
        else:
            kind = "SZCCS"
        zval = zeff
    elif report.zcz_front >= 1 and _cross_zero_at_origin(S, exact):
        kind, zval = "ZCCS", report.zcz_front
    return replace(S, kind=kind, zcz=zval if kind != "MOCCS" else min(zval, L - 1)), report


def _cross_zero_at_origin(S: CodeSet, exact) -> bool:
    C, ex = corr.set_profiles(S.values, exact=exact)
    return zone_widths(C, S.L, ex)[2]


def _root_exponent(c: complex, q: int) -> int | None:
    k = int(round(np.angle(c) * q / (2 * np.pi))) % q
    return k if abs(c - np.exp(2j * np.pi * k / q)) < 1e-12 else None


def transform_scale(S: CodeSet, c: Sequence[complex]) -> CodeSet:
    """Multiply code ``k`` by the nonzero scalar ``c[k]``."""
    c = np.asarray(c, dtype=complex).reshape(-1)
    if c.size != S.K:
        raise ValueError(f"need {S.K} scalars, got {c.size}")
    if np.any(c == 0):
        raise ValueError("scaling constants must be nonzero")
    prov = dict(S.provenance)
    prov.setdefault("transforms", [])
    prov["transforms"] = prov["transforms"] + [{"scale": [[z.real, z.imag] for z in c]}]
    if S.exponents is not None:
        shifts = [_root_exponent(z, S.q) for z in c]
        if all(s is not None for s in shifts):
            out = CodeSet.from_exponents(S.exponents + np.array(shifts)[:, None, None], S.q, prov)
            return replace(out, kind=S.kind, zcz=S.zcz)
    return CodeSet(S.values * c[:, None, None], kind=S.kind, zcz=S.zcz, provenance=prov)


def transform_reverse(S: CodeSet) -> CodeSet:
    """Reverse every constituent sequence."""
    prov = dict(S.provenance)
    prov["transforms"] = list(prov.get("transforms", [])) + ["reverse"]
    exps = None if S.exponents is None else S.exponents[:, :, ::-1].copy()
    return CodeSet(S.values[:, :, ::-1].copy(), S.q, exps, S.kind, S.zcz, prov)
