"""
Sparse training matrices for spatial-modulation MIMO channel estimation.

Layout (``D = n_t / n_active`` row groups, ``J`` blocks, block width ``theta``,
zero slot width ``lam``)::

    Omega = (Omega_1, 0, Omega_2, 0, ..., Omega_J, 0)

Block ``Omega_j`` has ``D * theta`` columns.  Row group ``n`` (rows
``n*n_active .. (n+1)*n_active - 1``) carries the ``j``-th sequence of each
selected code in columns ``[n*theta, (n+1)*theta)``; everything else is zero
("silent").  Every row therefore holds ``J * theta`` unimodular entries and has
energy ``E = J * theta``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .codeset import CodeSet
from .corr import _resolve_exact, is_zero, periodic_profiles, set_profiles

__all__ = [
    "TrainingMatrix",
    "CriteriaReport",
    "build_omega",
    "extract_family",
    "check_criteria",
    "enlarge",
    "without_zero_slots",
]

MAX_VIOLATIONS = 1000


@dataclass(frozen=True, eq=False)
class TrainingMatrix:
    """An ``n_t x J*(D*theta + lam)`` training matrix with its layout meta."""

    entries: np.ndarray
    n_active: int
    lam: int
    J: int
    theta: int

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.ndim != 2:
            raise ValueError("entries must be a 2-D array")
        n_t = e.shape[0]
        for name in ("n_active", "J", "theta"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if int(self.lam) < 0:
            raise ValueError("lam must be >= 0")
        if n_t % int(self.n_active):
            raise ValueError(f"n_active={self.n_active} does not divide n_t={n_t}")
        D = n_t // int(self.n_active)
        L = int(self.J) * (D * int(self.theta) + int(self.lam))
        if e.shape[1] != L:
            raise ValueError(f"expected {L} columns for this layout, got {e.shape[1]}")
        nz = e != 0
        if np.any(nz.sum(axis=1) != int(self.J) * int(self.theta)):
            raise ValueError("every row must carry exactly J*theta nonzero entries")
        if not np.allclose(np.abs(e[nz]), 1.0, atol=1e-12):
            raise ValueError("nonzero entries must be unimodular")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        for name in ("n_active", "lam", "J", "theta"):
            object.__setattr__(self, name, int(getattr(self, name)))

    @property
    def n_t(self) -> int:
        return self.entries.shape[0]

    @property
    def D(self) -> int:
        return self.n_t // self.n_active

    @property
    def L_total(self) -> int:
        return self.entries.shape[1]

    @property
    def energy(self) -> int:
        return self.J * self.theta

    @property
    def meta(self) -> dict:
        return {"n_t": self.n_t, "n_active": self.n_active, "lam": self.lam, "J": self.J, "theta": self.theta}

    def __eq__(self, other):
        if not isinstance(other, TrainingMatrix):
            return NotImplemented
        return self.meta == other.meta and np.array_equal(self.entries, other.entries)

    __hash__ = None

    # -- serialization ----------------------------------------------------
    def to_csv(self) -> str:
        return "\n".join(",".join(_fmt_entry(v) for v in row) for row in self.entries) + "\n"

    def to_dict(self) -> dict:
        return {"meta": self.meta, "rows": [[_fmt_entry(v) for v in row] for row in self.entries]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainingMatrix":
        m = d["meta"]
        rows = np.array([[complex(s.replace("+-", "-")) for s in row] for row in d["rows"]])
        if rows.shape[0] != int(m["n_t"]):
            raise ValueError("row count disagrees with meta n_t")
        return cls(rows, m["n_active"], m["lam"], m["J"], m["theta"])

    @classmethod
    def from_json(cls, text: str) -> "TrainingMatrix":
        return cls.from_dict(json.loads(text))


def _num(x: float) -> str:
    x = float(x)
    return str(int(x)) if x == int(x) else repr(x)


def _fmt_entry(v: complex) -> str:
    if v == 0:
        return "0"
    im = v.imag
    return f"{_num(v.real)}{'-' if im < 0 else '+'}{_num(abs(im))}j"


def _code_array(S, codes, n_active):
    if isinstance(S, CodeSet):
        vals = S.values
    else:
        vals = np.asarray(S, dtype=complex)
        if vals.ndim != 3:
            raise ValueError("code array must have shape (K, J, theta)")
    K = vals.shape[0]
    if codes is None:
        if n_active > K:
            raise ValueError(f"n_active={n_active} exceeds the number of codes K={K}")
        codes = range(n_active)
    codes = [int(c) for c in codes]
    if len(codes) != n_active:
        raise ValueError(f"need {n_active} code indices, got {len(codes)}")
    if any(not 0 <= c < K for c in codes):
        raise ValueError(f"code index outside 0..{K - 1}")
    return vals[codes]


def _assemble(F: np.ndarray, lam: int) -> np.ndarray:
    """Place a family ``F[j, k, n, :]`` into the block layout."""
    J, Na, D, theta = F.shape
    W = D * theta + lam
    out = np.zeros((D * Na, J * W), dtype=complex)
    for j in range(J):
        for n in range(D):
            c0 = j * W + n * theta
            out[n * Na:(n + 1) * Na, c0:c0 + theta] = F[j, :, n]
    return out


def build_omega(S, n_t: int, n_active: int, lam: int, codes=None) -> TrainingMatrix:
    """
    Training matrix seeded by a code set.

    Parameters
    ----------
    S : CodeSet or array of shape (K, J, theta)
        Code ``k`` supplies sequence ``j`` to block ``j``.
    n_t, n_active : int
        Antennas and simultaneously active antennas; ``n_active | n_t``.
    lam : int
        Width of the zero slot after each block.
    codes : sequence of int, optional
        Which ``n_active`` codes to use (0-based).  Defaults to the first ones.
    """
    n_t, n_active, lam = int(n_t), int(n_active), int(lam)
    if n_active < 1 or n_t < 1 or n_t % n_active:
        raise ValueError(f"n_active={n_active} must divide n_t={n_t}")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    A = _code_array(S, codes, n_active)  # (n_active, J, theta)
    D = n_t // n_active
    J, theta = A.shape[1], A.shape[2]
    F = np.broadcast_to(A.transpose(1, 0, 2)[:, :, None, :], (J, n_active, D, theta))
    return TrainingMatrix(_assemble(F, lam), n_active, lam, J, theta)


def extract_family(omega: TrainingMatrix) -> np.ndarray:
    """Return ``F`` with ``F[j, k, n]`` = the length-theta sequence of code k, group n, block j."""
    Na, D, th, W = omega.n_active, omega.D, omega.theta, omega.D * omega.theta + omega.lam
    F = np.empty((omega.J, Na, D, th), dtype=complex)
    for j in range(omega.J):
        for n in range(D):
            c0 = j * W + n * th
            F[j, :, n] = omega.entries[n * Na:(n + 1) * Na, c0:c0 + th]
    return F


@dataclass
class CriteriaReport:
    """Outcome of the block-correlation criteria and the direct periodic check."""

    eq5_ok: bool
    eq6_ok: bool
    eq7_ok: bool
    eq3_ok: bool
    lam: int
    exact: bool
    violations: list = field(default_factory=list)

    @property
    def block_ok(self) -> bool:
        return self.eq5_ok and self.eq6_ok and self.eq7_ok

    @property
    def optimal(self) -> bool:
        return self.block_ok and self.eq3_ok

    def to_dict(self) -> dict:
        return {
            "eq5_ok": self.eq5_ok, "eq6_ok": self.eq6_ok, "eq7_ok": self.eq7_ok, "eq3_ok": self.eq3_ok,
            "optimal": self.optimal, "lam": self.lam, "exact": self.exact,
            "violations": [
                {"check": c, "i": i, "j": j, "group": n, "u": u, "re": v.real, "im": v.imag}
                for c, i, j, n, u, v in self.violations
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _at(C, theta, u):
    """Slice ``C[..., u]`` of a profile array, zero outside ``|u| < theta``."""
    if abs(u) >= theta:
        return np.zeros(C.shape[:-1], dtype=complex)
    return C[..., u + theta - 1]


def check_criteria(obj, lam: int | None = None, exact: bool | None = None) -> CriteriaReport:
    """
    Check a training matrix (or a raw family) for LS-optimality.

    ``obj`` is a :class:`TrainingMatrix` or an array ``F[j, k, n, :]``.  The
    block checks are

    * eq5: ``sum_j rho_{s(j,k,n)}(u) = 0`` for ``1 <= u <= lam``;
    * eq6: ``sum_j rho_{s(j,k,n), s(j,k',n)}(u) = 0`` for ``|u| <= lam``, ``k != k'``;
    * eq7: ``sum_j rho_{s(j,k,n+1), s(j,k',n)}(theta - u) = 0`` for ``1 <= u <= lam``
      and all ``k, k'`` (including ``k = k'``).

    eq3 is evaluated directly on the assembled rows with cyclic correlation
    over the full width: ``phi_{x_i, x_j}(u) = E * [i == j and u == 0]`` for
    ``0 <= u <= lam``.  With ``lam < theta`` the two verdicts agree.
    """
    if isinstance(obj, TrainingMatrix):
        F = extract_family(obj)
        lam = obj.lam if lam is None else int(lam)
        rows = obj.entries
    else:
        F = np.asarray(obj, dtype=complex)
        if F.ndim != 4:
            raise ValueError("family must have shape (J, n_active, D, theta)")
        if lam is None:
            raise ValueError("lam is required when checking a raw family")
        lam = int(lam)
        rows = _assemble(F, lam)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    J, Na, D, theta = F.shape
    ex = _resolve_exact(F.ravel(), exact)
    E = J * theta
    viol: list = []

    def note(check, i, j, n, u, val):
        if len(viol) < MAX_VIOLATIONS:
            viol.append((check, int(i), int(j), int(n), int(u), complex(val)))

    groups = [F[:, :, n].transpose(1, 0, 2) for n in range(D)]  # (Na, J, theta)
    ok5 = ok6 = ok7 = True
    for n in range(D):
        C, _ = set_profiles(groups[n], exact=ex)
        for u in range(-lam, lam + 1):
            Cu = _at(C, theta, u)
            bad = ~is_zero(Cu, theta, ex)
            for k, k2 in zip(*np.nonzero(bad)):
                if k == k2 and u > 0:
                    ok5 = False
                    note("eq5", k, k2, n, u, Cu[k, k2])
                elif k != k2:
                    ok6 = False
                    note("eq6", k, k2, n, u, Cu[k, k2])
        if n + 1 < D:
            C, _ = set_profiles(groups[n + 1], groups[n], exact=ex)
            for u in range(1, lam + 1):
                Cu = _at(C, theta, theta - u)
                bad = ~is_zero(Cu, theta, ex)
                for k, k2 in zip(*np.nonzero(bad)):
                    ok7 = False
                    note("eq7", k, k2, n, theta - u, Cu[k, k2])

    P, _ = periodic_profiles(rows, exact=ex)
    L = rows.shape[1]
    target = np.zeros_like(P[..., : min(lam, L - 1) + 1])
    target[np.arange(rows.shape[0]), np.arange(rows.shape[0]), 0] = E
    diff = P[..., : target.shape[-1]] - target
    bad = ~is_zero(diff, L, ex)
    for i, j, u in zip(*np.nonzero(bad)):
        note("eq3", i, j, -1, u, P[i, j, u])
    return CriteriaReport(ok5, ok6, ok7, not bool(bad.any()), lam, ex, viol)


def enlarge(omega: TrainingMatrix, t: int) -> TrainingMatrix:
    """Concatenate ``t`` copies of ``omega`` horizontally (``J' = t*J``)."""
    t = int(t)
    if t < 1:
        raise ValueError("t must be >= 1")
    return TrainingMatrix(np.tile(omega.entries, (1, t)), omega.n_active, omega.lam, omega.J * t, omega.theta)


def without_zero_slots(omega: TrainingMatrix) -> TrainingMatrix:
    """Drop the zero-slot columns, giving the same blocks with ``lam = 0``."""
    return TrainingMatrix(_assemble(extract_family(omega), 0), omega.n_active, 0, omega.J, omega.theta)
