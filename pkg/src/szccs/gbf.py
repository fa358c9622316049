"""
Generalized Boolean functions over Z_2^m with values in Z_q, and the
unimodular sequences they induce.

Bit order: the index ``i`` is read as ``i = sum_k x_k 2^(k-1)``, so ``x_1`` is
the least significant bit and ``x_m`` the most significant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "GeneralizedBooleanFunction",
    "UnimodularSequence",
    "Permutation",
    "evaluate",
    "to_sequence",
    "render_complex",
    "truth_table_bits",
    "parse_gbf",
]

# exact renderings for the alphabets that admit Gaussian-integer arithmetic
_EXACT_ROOTS = {
    2: np.array([1.0 + 0j, -1.0 + 0j]),
    4: np.array([1.0 + 0j, 1j, -1.0 + 0j, -1j]),
}


def _check_modulus(q: int) -> int:
    q = int(q)
    if q < 2 or q % 2:
        raise ValueError(f"q must be even and >= 2, got {q}")
    return q


def truth_table_bits(m: int) -> np.ndarray:
    """Return the ``(2**m, m)`` 0/1 matrix whose column ``k-1`` holds x_k."""
    i = np.arange(1 << m, dtype=np.int64)
    return ((i[:, None] >> np.arange(m)) & 1).astype(np.int64)


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1, ..., m}; ``p(s)`` returns the image of ``s``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, s: int) -> int:
        if not 1 <= s <= self.m:
            raise IndexError(f"permutation argument {s} outside 1..{self.m}")
        return self.images[s - 1]

    def __len__(self):
        return self.m


@dataclass(frozen=True)
class GeneralizedBooleanFunction:
    """
    Multilinear polynomial ``Z_2^m -> Z_q`` stored sparsely.

    ``monomials`` maps a sorted tuple of variable indices (1-based) to its
    coefficient in Z_q.  The empty monomial is kept in ``constant``.
    """

    q: int
    m: int
    monomials: Mapping[tuple[int, ...], int] = field(default_factory=dict)
    constant: int = 0

    def __post_init__(self):
        q = _check_modulus(self.q)
        m = int(self.m)
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        const = int(self.constant) % q
        terms: dict[tuple[int, ...], int] = {}
        for idx, coef in dict(self.monomials).items():
            if isinstance(idx, int):
                idx = (idx,)
            key = tuple(sorted(set(int(k) for k in idx)))
            if any(k < 1 or k > m for k in key):
                raise ValueError(f"variable index out of range 1..{m}: {idx}")
            if not key:
                const = (const + int(coef)) % q
                continue
            terms[key] = (terms.get(key, 0) + int(coef)) % q
        terms = {k: v for k, v in sorted(terms.items(), key=lambda t: (len(t[0]), t[0])) if v}
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "monomials", terms)
        object.__setattr__(self, "constant", const)

    def __hash__(self):
        return hash((self.q, self.m, tuple(self.monomials.items()), self.constant))

    def __add__(self, other: "GeneralizedBooleanFunction") -> "GeneralizedBooleanFunction":
        if (self.q, self.m) != (other.q, other.m):
            raise ValueError("cannot add functions over different (q, m)")
        terms = dict(self.monomials)
        for k, v in other.monomials.items():
            terms[k] = terms.get(k, 0) + v
        return GeneralizedBooleanFunction(self.q, self.m, terms, self.constant + other.constant)

    def plus(self, terms: Iterable[tuple[Iterable[int], int]], constant: int = 0):
        """Return ``self`` plus the given ``(indices, coefficient)`` terms."""
        new = dict(self.monomials)
        for idx, coef in terms:
            key = tuple(sorted(set(idx)))
            new[key] = new.get(key, 0) + coef
        return GeneralizedBooleanFunction(self.q, self.m, new, self.constant + constant)

    def truth_table(self) -> np.ndarray:
        """Values ``f(0), ..., f(2^m - 1)`` as an int64 array reduced mod q."""
        bits = truth_table_bits(self.m)
        out = np.full(1 << self.m, self.constant, dtype=np.int64)
        for idx, coef in self.monomials.items():
            cols = [k - 1 for k in idx]
            out += coef * np.prod(bits[:, cols], axis=1)
        return out % self.q

    def degree(self) -> int:
        return max((len(k) for k in self.monomials), default=0)

    def __str__(self):
        return format_gbf(self)


def evaluate(f: GeneralizedBooleanFunction, i: int) -> int:
    """Value of ``f`` at the point whose binary expansion is ``i`` (x_1 = LSB)."""
    i = int(i)
    if not 0 <= i < (1 << f.m):
        raise IndexError(f"index {i} outside [0, 2^{f.m})")
    total = f.constant
    for idx, coef in f.monomials.items():
        if all((i >> (k - 1)) & 1 for k in idx):
            total += coef
    return total % f.q


class UnimodularSequence:
    """A length-L sequence ``xi_q^{e(i)}`` stored by its Z_q exponents."""

    __slots__ = ("q", "exponents")

    def __init__(self, q: int, exponents):
        q = _check_modulus(q)
        e = np.asarray(exponents, dtype=np.int64).reshape(-1)
        if e.size < 1:
            raise ValueError("sequence must have length >= 1")
        e = e % q
        e.setflags(write=False)
        self.q = q
        self.exponents = e

    def __len__(self):
        return int(self.exponents.size)

    def __eq__(self, other):
        if not isinstance(other, UnimodularSequence):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.exponents, other.exponents)

    def __hash__(self):
        return hash((self.q, self.exponents.tobytes()))

    def __repr__(self):
        return f"UnimodularSequence(q={self.q}, exponents={self.exponents.tolist()})"

    @property
    def exact(self) -> bool:
        """True when values are Gaussian integers (q in {2, 4})."""
        return self.q in _EXACT_ROOTS

    def complex(self) -> np.ndarray:
        return render_complex(self)

    def reversed(self) -> "UnimodularSequence":
        return UnimodularSequence(self.q, self.exponents[::-1])

    def __getitem__(self, item):
        if isinstance(item, slice):
            return UnimodularSequence(self.q, self.exponents[item])
        return int(self.exponents[item])


def to_sequence(f: GeneralizedBooleanFunction, L: int | None = None) -> UnimodularSequence:
    """Truncate the truth table of ``f`` to its first ``L`` entries."""
    full = 1 << f.m
    L = full if L is None else int(L)
    if not 1 <= L <= full:
        raise ValueError(f"L must lie in [1, {full}], got {L}")
    return UnimodularSequence(f.q, f.truth_table()[:L])


def render_complex(s: UnimodularSequence) -> np.ndarray:
    """Map exponents to ``exp(2*pi*j*e/q)``; exact for q in {2, 4}."""
    if s.q in _EXACT_ROOTS:
        return _EXACT_ROOTS[s.q][s.exponents]
    return np.exp(2j * np.pi * s.exponents / s.q)


# -- text form --------------------------------------------------------------
#
#   q=2 m=4 : 1*x1x2 + 1*x2x3 + 3
#
# Terms are separated by '+'.  A term is ``coef*x<i>x<j>...``, a bare
# monomial ``x1x3`` (coefficient 1), or a bare integer constant.

_HEADER = re.compile(r"^\s*q\s*=\s*(\d+)\s+m\s*=\s*(\d+)\s*:(.*)$")
_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?((?:x\d+)+)$|^(\d+)$")


def format_gbf(f: GeneralizedBooleanFunction) -> str:
    parts = [f"{c}*" + "".join(f"x{k}" for k in idx) for idx, c in f.monomials.items()]
    if f.constant or not parts:
        parts.append(str(f.constant))
    return f"q={f.q} m={f.m} : " + " + ".join(parts)


def parse_gbf(text: str) -> GeneralizedBooleanFunction:
    """Inverse of :func:`format_gbf`."""
    mt = _HEADER.match(text)
    if not mt:
        raise ValueError(f"expected 'q=<q> m=<m> : <terms>', got {text!r}")
    q, m, body = int(mt.group(1)), int(mt.group(2)), mt.group(3).strip()
    terms: dict[tuple[int, ...], int] = {}
    const = 0
    for raw in filter(None, (t.replace(" ", "") for t in body.split("+"))):
        tm = _TERM.match(raw)
        if not tm:
            raise ValueError(f"bad term {raw!r}")
        if tm.group(3) is not None:
            const += int(tm.group(3))
            continue
        coef = int(tm.group(1)) if tm.group(1) else 1
        idx = tuple(int(v) for v in re.findall(r"x(\d+)", tm.group(2)))
        key = tuple(sorted(set(idx)))
        if len(key) != len(idx):
            raise ValueError(f"repeated variable in {raw!r}")
        terms[key] = terms.get(key, 0) + coef
    return GeneralizedBooleanFunction(q, m, terms, const)
