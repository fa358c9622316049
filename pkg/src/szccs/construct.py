"""
Sequence-family generators built from generalized Boolean functions, plus the
baseline families (Zadoff-Chu, random binary, a printed cross Z-complementary
pair) used for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codeset import CodeSet
from .gbf import GeneralizedBooleanFunction, Permutation, UnimodularSequence, to_sequence

__all__ = [
    "OFFSETS",
    "Theorem2Params",
    "Theorem3Params",
    "path_function",
    "lemma1_functions",
    "lemma1_gcp",
    "theorem2_functions",
    "theorem2_szccs",
    "theorem3_functions",
    "theorem3_szccs",
    "random_theorem2_params",
    "random_theorem3_params",
    "zadoff_chu",
    "zadoff_chu_sequence",
    "random_binary",
    "czcp_fixture",
    "czcp_codeset",
]

# Binary offset vectors selecting the quadratic/linear shifts of each code.
OFFSETS = (
    (0, 0, 0, 0),
    (1, 0, 1, 0),
    (1, 1, 0, 0),
    (0, 1, 1, 0),
    (0, 0, 0, 1),
    (1, 0, 1, 1),
    (1, 1, 0, 1),
    (0, 1, 1, 1),
)


def _as_perm(pi, m: int) -> Permutation:
    if pi is None or pi == "identity":
        return Permutation.identity(m)
    p = pi if isinstance(pi, Permutation) else Permutation(tuple(pi))
    if p.m != m:
        raise ValueError(f"permutation has {p.m} points, expected {m}")
    return p


def _as_coeffs(values, n: int, q: int, name: str) -> tuple[int, ...]:
    vals = (0,) * n if values is None else tuple(int(v) % q for v in values)
    if len(vals) != n:
        raise ValueError(f"{name} needs {n} coefficients, got {len(vals)}")
    return vals


def _require_even(q: int):
    if int(q) < 2 or int(q) % 2:
        raise ValueError(f"q must be even, got {q}")


def path_function(q: int, m: int, pi: Permutation, length: int, linear=None, constant: int = 0):
    """``(q/2) sum_{s<length} x_pi(s) x_pi(s+1) + sum_s linear[s] x_s + constant``."""
    h = q // 2
    terms = {}
    for s in range(1, length):
        key = tuple(sorted((pi(s), pi(s + 1))))
        terms[key] = terms.get(key, 0) + h
    for s, c in enumerate(linear or (), start=1):
        terms[(s,)] = terms.get((s,), 0) + c
    return GeneralizedBooleanFunction(q, m, terms, constant)


def lemma1_functions(q: int, m: int, pi=None, coeffs=None, constant: int = 0, variant: str = "b"):
    """Boolean functions ``(a, b)`` or ``(a, c)`` of the standard Golay pair.

    Variants: ``"b"`` adds ``(q/2) x_{pi(1)}``, ``"c"`` adds ``(q/2) x_m``
    and ``"c-end"`` adds ``(q/2) x_{pi(m)}``. The literal ``"c"`` partner is
    complementary only when ``m`` is an end of the path, i.e.
    ``m in (pi(1), pi(m))``; ``"c-end"`` is complementary for every ``pi``.
    """
    _require_even(q)
    p = _as_perm(pi, m)
    cs = _as_coeffs(coeffs, m, q, "coeffs")
    a = path_function(q, m, p, m, cs, constant)
    if variant == "b":
        other = a.plus([((p(1),), q // 2)])
    elif variant == "c":
        other = a.plus([((m,), q // 2)])
    elif variant == "c-end":
        other = a.plus([((p(m),), q // 2)])
    else:
        raise ValueError(f"variant must be 'b', 'c' or 'c-end', got {variant!r}")
    return a, other


def lemma1_gcp(q: int, m: int, pi=None, coeffs=None, constant: int = 0, variant: str = "b"):
    """Golay complementary pair of length ``2^m`` as two UnimodularSequences."""
    a, other = lemma1_functions(q, m, pi, coeffs, constant, variant)
    return to_sequence(a), to_sequence(other)


@dataclass(frozen=True)
class Theorem2Params:
    """Parameters of the optimal (8, 2, 2^m, 2^(m-2)-1) construction."""

    q: int
    m: int
    pi: Permutation | None = None
    mu_s: tuple[int, ...] | None = None
    mu: int = 0

    def __post_init__(self):
        _require_even(self.q)
        if self.m < 4:
            raise ValueError(f"m must be >= 4, got {self.m}")
        p = _as_perm(self.pi, self.m)
        if {p(self.m - 1), p(self.m)} != {self.m - 1, self.m}:
            raise ValueError("permutation must satisfy {pi(m-1), pi(m)} = {m-1, m}")
        object.__setattr__(self, "pi", p)
        object.__setattr__(self, "mu_s", _as_coeffs(self.mu_s, self.m, self.q, "mu_s"))
        object.__setattr__(self, "mu", int(self.mu) % self.q)

    @property
    def L(self) -> int:
        return 1 << self.m

    @property
    def Z(self) -> int:
        return (1 << (self.m - 2)) - 1

    def to_dict(self) -> dict:
        return {"q": self.q, "m": self.m, "pi": list(self.pi.images), "mu_s": list(self.mu_s), "mu": self.mu}


def theorem2_functions(p: Theorem2Params):
    """The eight ``(a_k, b_k)`` function pairs, in offset-table order."""
    q, m, pi, h = p.q, p.m, p.pi, p.q // 2
    f = path_function(q, m, pi, m - 1, p.mu_s, p.mu)
    x2, x1, x0 = pi(m - 2), pi(m - 1), pi(m)
    blocks = (
        [((x2,), h), ((x2, x0), h)],
        [((x1,), h), ((x2, x0), h)],
        [((x0,), h), ((x1, x0), h)],
        [((x1,), h), ((x2, x0), h), ((x1, x0), h)],
    )
    out = []
    for d in OFFSETS:
        a = f.plus([t for dk, blk in zip(d, blocks) if dk for t in blk])
        out.append((a, a.plus([((pi(1),), h)])))
    return out


def theorem2_szccs(p: Theorem2Params) -> CodeSet:
    """Optimal 8-code, 2-sequence set of length ``2^m``."""
    exps = [[to_sequence(a).exponents, to_sequence(b).exponents] for a, b in theorem2_functions(p)]
    prov = {"family": "theorem2", "params": p.to_dict(), "expected": {"K": 8, "M": 2, "L": p.L, "Z": p.Z}}
    return CodeSet.from_exponents(exps, p.q, prov)


@dataclass(frozen=True)
class Theorem3Params:
    """Parameters of the (2, 2, 2^(m-1) + 2^v, 2^v - 1) construction."""

    q: int
    m: int
    v: int
    pi: Permutation | None = None
    lambda_s: tuple[int, ...] | None = None
    mu_s: tuple[int, ...] | None = None
    mu: int = 0

    def __post_init__(self):
        _require_even(self.q)
        if self.m < 3:
            raise ValueError(f"m must be >= 3, got {self.m}")
        if not 1 <= self.v < self.m - 1:
            raise ValueError(f"v must satisfy 1 <= v < m-1, got v={self.v}, m={self.m}")
        p = _as_perm(self.pi, self.m)
        if {p(s) for s in range(1, self.v + 1)} != set(range(1, self.v + 1)):
            raise ValueError("permutation must map {1..v} onto itself")
        if p(self.m) != self.m:
            raise ValueError("permutation must fix m")
        object.__setattr__(self, "pi", p)
        object.__setattr__(self, "lambda_s", _as_coeffs(self.lambda_s, self.m - 1, self.q, "lambda_s"))
        object.__setattr__(self, "mu_s", _as_coeffs(self.mu_s, self.m, self.q, "mu_s"))
        object.__setattr__(self, "mu", int(self.mu) % self.q)

    @property
    def L(self) -> int:
        return (1 << (self.m - 1)) + (1 << self.v)

    @property
    def Z(self) -> int:
        return (1 << self.v) - 1

    def to_dict(self) -> dict:
        return {
            "q": self.q, "m": self.m, "v": self.v, "pi": list(self.pi.images),
            "lambda_s": list(self.lambda_s), "mu_s": list(self.mu_s), "mu": self.mu,
        }


def theorem3_functions(p: Theorem3Params):
    """``[(a_k, b_k)]`` and ``[(c_k, d_k)]`` for k = 1, 2."""
    q, m, pi, h = p.q, p.m, p.pi, p.q // 2
    g = path_function(q, m, pi, m - 1, p.mu_s, p.mu)
    g = g.plus([((pi(s), m), lam) for s, lam in enumerate(p.lambda_s, start=1)])
    first, second = [], []
    for k in (1, 2):
        a = g.plus([((m - 1,), h * (k - 1)), ((m, pi(p.v)), h * (k - 1))])
        b = a.plus([((pi(1),), h)])
        c = a.plus([((m,), h)])
        d = c.plus([((pi(1),), h)])
        first.append((a, b))
        second.append((c, d))
    return first, second


def theorem3_szccs(p: Theorem3Params) -> tuple[CodeSet, CodeSet]:
    """Two 2-code sets of non-power-of-two length ``2^(m-1) + 2^v``."""
    L = p.L
    prov = {"family": "theorem3", "params": p.to_dict(), "expected": {"K": 2, "M": 2, "L": L, "Z": p.Z}}
    sets = []
    for tag, pairs in zip(("S", "S'"), theorem3_functions(p)):
        exps = [[to_sequence(x, L).exponents, to_sequence(y, L).exponents] for x, y in pairs]
        sets.append(CodeSet.from_exponents(exps, p.q, dict(prov, member=tag)))
    return sets[0], sets[1]


def _random_perm_fixing_blocks(rng, blocks: Sequence[Sequence[int]]) -> Permutation:
    """Permutation that maps each listed position block onto itself."""
    images = {}
    for blk in blocks:
        vals = list(blk)
        for pos, val in zip(blk, rng.permutation(vals)):
            images[pos] = int(val)
    return Permutation(tuple(images[i] for i in sorted(images)))


def random_theorem2_params(q: int, m: int, rng) -> Theorem2Params:
    pi = _random_perm_fixing_blocks(rng, [range(1, m - 1), (m - 1, m)])
    return Theorem2Params(q, m, pi, tuple(rng.integers(0, q, m)), int(rng.integers(0, q)))


def random_theorem3_params(q: int, m: int, v: int, rng, lambda_free: bool = True) -> Theorem3Params:
    """
    Uniform draw over the admissible parameters.

    With ``lambda_free=False`` the cross coefficients ``lambda_s`` for
    ``s < v`` are forced to zero.  Nonzero values there can break the zero
    zone (e.g. q=2, m=4, v=2, lambda_1=1 gives an auto-correlation sum of -4
    at shift 2), so only the restricted draw is guaranteed to verify.
    """
    pi = _random_perm_fixing_blocks(rng, [range(1, v + 1), range(v + 1, m), (m,)])
    lam = rng.integers(0, q, m - 1)
    if not lambda_free:
        lam[: v - 1] = 0
    return Theorem3Params(q, m, v, pi, tuple(lam), tuple(rng.integers(0, q, m)), int(rng.integers(0, q)))


def zadoff_chu_sequence(L: int, root: int) -> UnimodularSequence:
    """Zadoff-Chu sequence as exponents over Z_{2L}."""
    L, root = int(L), int(root)
    if L < 1:
        raise ValueError("L must be >= 1")
    if math.gcd(root, L) != 1:
        raise ValueError(f"root {root} is not coprime to L={L}")
    n = np.arange(L, dtype=np.int64)
    e = -root * (n * n if L % 2 == 0 else n * (n + 1))
    return UnimodularSequence(2 * L, e)


def zadoff_chu(L: int, root: int) -> np.ndarray:
    """
    ``exp(-j*pi*root*n^2/L)`` for even L, ``exp(-j*pi*root*n(n+1)/L)`` for odd L.
    """
    L = int(L)
    n = np.arange(L)
    if math.gcd(int(root), L) != 1:
        raise ValueError(f"root {root} is not coprime to L={L}")
    k = n * n if L % 2 == 0 else n * (n + 1)
    return np.exp(-1j * np.pi * root * k / L)


def random_binary(L: int, seed) -> UnimodularSequence:
    """Deterministic +/-1 sequence (exponents over Z_2)."""
    if int(L) < 1:
        raise ValueError("L must be >= 1")
    rng = np.random.default_rng(seed)
    return UnimodularSequence(2, rng.integers(0, 2, int(L)))


_CZCP_A = (1, 1, 1, -1, 1, 1, -1, 1, 1, -1, 1, 1, 1, -1, -1, -1)
_CZCP_B = (1, 1, 1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, 1, 1, 1)


def czcp_fixture() -> tuple[UnimodularSequence, UnimodularSequence]:
    """The printed length-16 cross Z-complementary pair ``(a, b)``."""
    to_exp = lambda s: [0 if v > 0 else 1 for v in s]
    return UnimodularSequence(2, to_exp(_CZCP_A)), UnimodularSequence(2, to_exp(_CZCP_B))


def czcp_codeset(layout: str = "omega") -> CodeSet:
    """
    The fixture as a code set.  ``"pair"`` gives the single code ``(a, b)``;
    ``"omega"`` gives ``{(a, b), (b, a)}``, the rows used for the training
    matrix comparison.
    """
    a, b = czcp_fixture()
    codes = {"pair": [[a, b]], "omega": [[a, b], [b, a]]}
    if layout not in codes:
        raise ValueError(f"layout must be 'pair' or 'omega', got {layout!r}")
    return CodeSet.from_sequences(codes[layout], {"family": "czcp-fixture", "layout": layout})
