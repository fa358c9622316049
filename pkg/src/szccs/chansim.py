"""
Monte-Carlo least-squares channel estimation over frequency-selective channels.

Received training block (the cyclic prefix is modelled by cyclic wrap)::

    y(t) = sum_n sum_{l=0}^{P-1} h[n, l] * x_n((t - l) mod L) + w(t)

``w`` is circular complex Gaussian with variance ``sigma2`` per sample.  MSE is
reported per channel coefficient: ``E ||h_hat - h||^2 / (n_t * P)``, so an
LS-optimal matrix reaches ``sigma2 / E``.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .training import TrainingMatrix

__all__ = [
    "CONVENTIONS",
    "RankDeficientError",
    "ChannelRealization",
    "SimConfig",
    "SimPoint",
    "SimResult",
    "draw_channel",
    "complex_normal",
    "regression_matrix",
    "transmit",
    "ls_estimate",
    "expected_mse",
    "min_mse",
    "noise_variance",
    "floor_mse",
    "run_campaign",
]

CONVENTIONS = ("block", "frame")
CHUNK = 1000


class RankDeficientError(np.linalg.LinAlgError):
    """The stacked regression matrix does not have full column rank."""


def _rows(omega) -> np.ndarray:
    return omega.entries if isinstance(omega, TrainingMatrix) else np.asarray(omega, dtype=complex)


def complex_normal(rng: np.random.Generator, shape, var: float = 1.0) -> np.ndarray:
    """Circular complex Gaussian samples with ``E|z|^2 = var``."""
    s = np.sqrt(var / 2.0)
    return s * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Tap matrix ``h[n, l]`` for ``n_t`` antennas and ``paths`` taps."""

    taps: np.ndarray
    seed: object = None

    @property
    def n_t(self) -> int:
        return self.taps.shape[0]

    @property
    def paths(self) -> int:
        return self.taps.shape[1]


def draw_channel(n_t: int, paths: int, seed=None) -> ChannelRealization:
    """i.i.d. CN(0, 1) taps (uniform power delay profile)."""
    rng = np.random.default_rng(seed)
    return ChannelRealization(complex_normal(rng, (int(n_t), int(paths))), seed)


def regression_matrix(omega, paths: int) -> np.ndarray:
    """
    ``X`` of shape ``(L, n_t * paths)``; column ``n*paths + l`` is row ``n`` of
    ``omega`` cyclically delayed by ``l``, so ``y = X @ h.ravel() + w``.
    """
    R = _rows(omega)
    paths = int(paths)
    if paths < 1:
        raise ValueError("paths must be >= 1")
    n_t, L = R.shape
    if paths > L:
        raise ValueError(f"paths={paths} exceeds the frame length {L}")
    X = np.empty((L, n_t * paths), dtype=complex)
    for n in range(n_t):
        for l in range(paths):
            X[:, n * paths + l] = np.roll(R[n], l)
    return X


def transmit(omega, h, sigma2: float = 0.0, rng=None) -> np.ndarray:
    """
    Received samples for one frame (or a batch of channels).

    ``h`` may be a :class:`ChannelRealization`, an ``(n_t, P)`` array, or a
    batch ``(B, n_t, P)``; the output then has shape ``(L,)`` or ``(B, L)``.
    """
    R = _rows(omega)
    H = h.taps if isinstance(h, ChannelRealization) else np.asarray(h, dtype=complex)
    single = H.ndim == 2
    if single:
        H = H[None]
    if H.ndim != 3 or H.shape[1] != R.shape[0]:
        raise ValueError(f"channel shape {H.shape[-2:]} does not match {R.shape[0]} antennas")
    L = R.shape[1]
    # cyclic convolution per antenna, summed over antennas
    FX = np.fft.fft(R, axis=-1)
    FH = np.fft.fft(H, n=L, axis=-1)
    y = np.fft.ifft(np.einsum("nt,bnt->bt", FX, FH), axis=-1)
    if sigma2 > 0:
        if rng is None:
            raise ValueError("an rng is required when sigma2 > 0")
        y = y + complex_normal(rng, y.shape, sigma2)
    return y[0] if single else y


class _Solver:
    """Cached LS solve for a fixed regression matrix."""

    def __init__(self, X: np.ndarray, allow_pinv: bool = False):
        self.X = X
        rank = np.linalg.matrix_rank(X)
        self.full_rank = rank == X.shape[1]
        if self.full_rank:
            self.G = X.conj().T @ X
            self.Ginv = np.linalg.inv(self.G)
            self.pinv = self.Ginv @ X.conj().T
        elif allow_pinv:
            warnings.warn(
                f"regression matrix is rank deficient ({rank} < {X.shape[1]}); using the pseudo-inverse",
                RuntimeWarning,
                stacklevel=3,
            )
            self.G = X.conj().T @ X
            self.Ginv = np.linalg.pinv(self.G)
            self.pinv = np.linalg.pinv(X)
        else:
            raise RankDeficientError(f"regression matrix has rank {rank} < {X.shape[1]} unknowns")

    def solve(self, Y: np.ndarray) -> np.ndarray:
        return Y @ self.pinv.T


def ls_estimate(omega, y, paths: int) -> np.ndarray:
    """
    Least-squares taps ``(n_t, paths)`` from a received frame ``y``.

    A batch ``y`` of shape ``(B, L)`` gives ``(B, n_t, paths)``.  Raises
    :class:`RankDeficientError` when the taps are not identifiable.
    """
    R = _rows(omega)
    s = _Solver(regression_matrix(R, paths))
    y = np.asarray(y, dtype=complex)
    return s.solve(y).reshape(y.shape[:-1] + (R.shape[0], int(paths)))


def expected_mse(omega, paths: int, sigma2: float) -> float:
    """Analytic per-coefficient LS error: ``sigma2 * tr((X^H X)^-1) / (n_t * paths)``."""
    X = regression_matrix(omega, paths)
    G = X.conj().T @ X
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise RankDeficientError("regression matrix is rank deficient")
    return float(sigma2 * np.real(np.trace(np.linalg.inv(G))) / X.shape[1])


def min_mse(n_t: int, n_active: int, lam: int, theta: int, ebn0) -> float:
    """
    Closed-form floor ``1 / (2 * (n_t / n_active) * (lam + theta) * ebn0)``.

    ``ebn0`` is linear, not dB.
    """
    for name, v in (("n_t", n_t), ("n_active", n_active), ("theta", theta), ("ebn0", ebn0)):
        if not v > 0:
            raise ValueError(f"{name} must be positive")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return 1.0 / (2.0 * (n_t / n_active) * (lam + theta) * ebn0)


def _db(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def noise_variance(omega: TrainingMatrix, paths: int, ebn0_db: float, convention: str = "block") -> float:
    """
    Noise variance for a given Eb/N0 (``N0 = 2 * sigma2``).

    ``"block"`` takes the bit energy as ``E / ((n_t/n_active) * (lam + theta))``
    with ``lam = paths - 1``.  ``"frame"`` spreads ``E`` over the whole frame:
    ``Eb = E / L_total``.
    """
    ebn0 = float(_db(ebn0_db))
    E = omega.energy
    if convention == "block":
        length = omega.D * (int(paths) - 1 + omega.theta)
    elif convention == "frame":
        length = omega.L_total
    else:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return E / (2.0 * length * ebn0)


def floor_mse(omega: TrainingMatrix, paths: int, ebn0_db: float, convention: str = "block") -> float:
    """``sigma2 / E`` under the chosen convention (the LS floor)."""
    return noise_variance(omega, paths, ebn0_db, convention) / omega.energy


@dataclass
class SimConfig:
    """
    One Eb/N0 sweep.

    ``paths`` is the channel length (``lam + 1`` taps).  Channel and noise draws
    use separate streams keyed by ``(seed, point, chunk)`` so results do not
    depend on how trials are scheduled.
    """

    omega: TrainingMatrix
    paths: int
    ebn0_db: list
    trials: int
    channel_seed: int = 0
    noise_seed: int = 1
    convention: str = "block"
    allow_pinv: bool = True

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        if int(self.paths) < 1:
            raise ValueError("paths must be >= 1")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")
        if len(self.ebn0_db) == 0:
            raise ValueError("ebn0_db must not be empty")
        self.trials = int(self.trials)
        self.paths = int(self.paths)
        self.ebn0_db = [float(v) for v in self.ebn0_db]


@dataclass
class SimPoint:
    ebn0_db: float
    mse: float
    stderr: float
    min_mse: float
    trials: int
    sigma2: float
    expected: float


@dataclass
class SimResult:
    points: list
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])

    def to_csv(self, extra: dict | None = None) -> str:
        """CSV with ``ebn0_db,mse,stderr,min_mse,trials`` plus any ``extra`` constant columns."""
        extra = extra or {}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(extra) + ["ebn0_db", "mse", "stderr", "min_mse", "trials"])
        for p in self.points:
            w.writerow(list(extra.values()) + [p.ebn0_db, repr(p.mse), repr(p.stderr), repr(p.min_mse), p.trials])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"meta": self.meta, "points": [asdict(p) for p in self.points]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def run_campaign(cfg: SimConfig) -> SimResult:
    """Per-coefficient LS MSE at each Eb/N0 point, with the analytic floor."""
    omega, P = cfg.omega, cfg.paths
    R = omega.entries
    n_t, L = R.shape
    solver = _Solver(regression_matrix(R, P), allow_pinv=cfg.allow_pinv)
    ncoef = n_t * P
    points = []
    for ip, snr in enumerate(cfg.ebn0_db):
        sigma2 = noise_variance(omega, P, snr, cfg.convention)
        errs = []
        for ic, start in enumerate(range(0, cfg.trials, CHUNK)):
            b = min(CHUNK, cfg.trials - start)
            rng_h = np.random.default_rng([cfg.channel_seed, ip, ic])
            rng_w = np.random.default_rng([cfg.noise_seed, ip, ic])
            H = complex_normal(rng_h, (b, n_t, P))
            Y = transmit(R, H, sigma2, rng_w)
            Hhat = solver.solve(Y).reshape(b, n_t, P)
            errs.append(np.sum(np.abs(Hhat - H) ** 2, axis=(1, 2)) / ncoef)
        e = np.concatenate(errs)
        se = float(e.std(ddof=1) / np.sqrt(e.size)) if e.size > 1 else float("nan")
        exp = float(sigma2 * np.real(np.trace(solver.Ginv)) / ncoef)
        points.append(SimPoint(snr, float(e.mean()), se, sigma2 / omega.energy, cfg.trials, sigma2, exp))
    meta = {
        **omega.meta, "paths": P, "trials": cfg.trials, "channel_seed": cfg.channel_seed,
        "noise_seed": cfg.noise_seed, "convention": cfg.convention, "full_rank": bool(solver.full_rank),
    }
    return SimResult(points, meta)
