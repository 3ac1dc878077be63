"""Exact linear algebra over the prime field F_p.

Matrices are plain ``int64`` numpy arrays of shape (rows, cols) acting on
column vectors; every function takes the prime explicitly. ``FpMatrix`` is a
thin immutable wrapper for callers that want the prime carried along.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, NotPrime

DEFAULT_PRIME = 2
_MAX_PRIME = 2**31 - 1  # keeps products of residues inside int64


@lru_cache(maxsize=64)
def check_prime(p: int) -> int:
    p = int(p)
    if p < 2 or p > _MAX_PRIME:
        raise NotPrime(f"{p} is not a supported prime")
    i = 2
    while i * i <= p:
        if p % i == 0:
            raise NotPrime(f"{p} is not prime")
        i += 1
    return p


def as_matrix(m, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64)
    if shape is not None:
        if a.size == 0:
            a = a.reshape(shape)
        if a.shape != tuple(shape):
            raise DimensionMismatch(f"expected shape {tuple(shape)}, got {a.shape}")
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2d matrix, got {a.ndim} dims")
    return a % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form and pivot column indices."""
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return m.copy() % p, np.zeros(0, dtype=np.int64)
    return _kernels.rref_kernel(m, p)


def rank(m: np.ndarray, p: int) -> int:
    return int(rref(m, p)[1].size)


def compose(m: np.ndarray, n: np.ndarray, p: int) -> np.ndarray:
    """The product ``m @ n``."""
    if m.shape[1] != n.shape[0]:
        raise DimensionMismatch(f"cannot compose {m.shape} with {n.shape}")
    if m.shape[1] == 0:
        return zeros(m.shape[0], n.shape[1])
    # chunk the inner dimension so int64 accumulation cannot overflow
    step = max(1, (2**62) // max(1, (p - 1) ** 2))
    out = zeros(m.shape[0], n.shape[1])
    for k in range(0, m.shape[1], step):
        out = (out + m[:, k : k + step] @ n[k : k + step, :]) % p
    return out


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the null space of ``m``."""
    rows, cols = m.shape
    r, piv = rref(m, p)
    pivset = set(piv.tolist())
    free = [c for c in range(cols) if c not in pivset]
    out = zeros(cols, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, c in enumerate(piv):
            out[c, k] = (-r[i, f]) % p
    return out


def image_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Linearly independent columns of ``m`` spanning its image."""
    _, piv = rref(m, p)
    return (m[:, piv] % p).astype(np.int64)


def cokernel(m: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Return ``(dim, q)`` with ``q`` surjective and ``ker q = im m``."""
    q = kernel_basis(np.ascontiguousarray(m.T), p).T.copy()
    return q.shape[0], q


def direct_sum(m: np.ndarray, n: np.ndarray) -> np.ndarray:
    out = zeros(m.shape[0] + n.shape[0], m.shape[1] + n.shape[1])
    out[: m.shape[0], : m.shape[1]] = m
    out[m.shape[0] :, m.shape[1] :] = n
    return out


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some ``x`` with ``a @ x = b``, or None when the system is inconsistent."""
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"cannot solve {a.shape} against {b.shape}")
    n = a.shape[1]
    if b.shape[1] == 0:
        return zeros(n, 0)
    r, piv = rref(np.hstack([a, b]), p)
    if piv.size and piv[-1] >= n:
        return None
    x = zeros(n, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x


def solve_right(q: np.ndarray, target: np.ndarray, p: int) -> np.ndarray | None:
    """Some ``m`` with ``m @ q = target``."""
    x = solve(np.ascontiguousarray(q.T), np.ascontiguousarray(target.T), p)
    return None if x is None else x.T.copy()


def extend_to_basis(basis: np.ndarray, n: int, p: int) -> list[int]:
    """Indices of standard vectors completing ``span(basis)`` to all of K^n.

    Pivot columns of the reduced ``[basis | I]`` beyond the basis block.
    """
    k = basis.shape[1]
    _, piv = rref(np.hstack([basis.reshape(n, k), identity(n)]), p)
    return [int(c) - k for c in piv if c >= k]


def is_zero(m: np.ndarray, p: int) -> bool:
    return not np.any(np.asarray(m) % p)


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """Immutable matrix with entries reduced modulo ``p``."""

    entries: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        p = check_prime(self.p)
        a = as_matrix(self.entries, p).copy()
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_rows(cls, rows: list[list[int]], p: int = DEFAULT_PRIME, cols: int | None = None) -> FpMatrix:
        if not rows:
            return cls(zeros(0, cols or 0), p)
        return cls(np.array(rows, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def _wrap(self, a: np.ndarray) -> FpMatrix:
        return FpMatrix(a, self.p)

    def _other(self, other: FpMatrix) -> np.ndarray:
        if other.p != self.p:
            raise DimensionMismatch(f"field mismatch: F_{self.p} vs F_{other.p}")
        return other.entries

    def rank(self) -> int:
        return rank(self.entries, self.p)

    def rref(self) -> FpMatrix:
        return self._wrap(rref(self.entries, self.p)[0])

    def kernel_basis(self) -> FpMatrix:
        return self._wrap(kernel_basis(self.entries, self.p))

    def image_basis(self) -> FpMatrix:
        return self._wrap(image_basis(self.entries, self.p))

    def cokernel(self) -> tuple[int, FpMatrix]:
        d, q = cokernel(self.entries, self.p)
        return d, self._wrap(q)

    def compose(self, other: FpMatrix) -> FpMatrix:
        return self._wrap(compose(self.entries, self._other(other), self.p))

    __matmul__ = compose

    def direct_sum(self, other: FpMatrix) -> FpMatrix:
        return self._wrap(direct_sum(self.entries, self._other(other)))

    def __add__(self, other: FpMatrix) -> FpMatrix:
        return self._wrap((self.entries + self._other(other)) % self.p)

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        return self._wrap((self.entries - self._other(other)) % self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.all(self.entries == other.entries))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.entries.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"
