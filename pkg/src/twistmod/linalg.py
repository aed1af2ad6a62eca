"""Exact dense linear algebra over prime fields GF(p).

Matrices are plain ``numpy`` integer arrays with entries reduced into
``[0, p)``; the prime travels alongside as an ``int``.  Elimination uses
deterministic pivoting (first nonzero entry in column order) so witnesses
are reproducible from run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DTYPE = np.int64

# float64 matmul is exact while every partial sum stays below 2**53
_FLOAT_EXACT = 2**53


class PrimeError(ValueError):
    pass


class ShapeError(ValueError):
    pass


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return ``p`` if it is a prime (trial division), else raise PrimeError."""
    p = int(p)
    if p < 2:
        raise PrimeError(f"{p} is not a prime")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise PrimeError(f"{p} is not a prime")
        d += 1
    return p


def is_power_of(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


def as_matrix(a, p: int) -> np.ndarray:
    arr = np.asarray(a, dtype=DTYPE)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got shape {arr.shape}")
    return np.mod(arr, p)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=DTYPE)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product ``a @ b`` reduced mod p (also works on stacks of matrices)."""
    if a.shape[-1] != b.shape[-2 if b.ndim > 1 else 0]:
        raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        out = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.mod(out, p).astype(DTYPE)
    return np.mod(np.matmul(a.astype(object), b.astype(object)), p).astype(DTYPE)


def matpow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    result = identity(a.shape[0])
    base = a
    while k:
        if k & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        k >>= 1
    return result


def kron(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Kronecker product; entry ((i,j),(k,l)) is a[i,k] * b[j,l]."""
    return np.mod(np.kron(a, b), p).astype(DTYPE)


def inv_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(int(x), p - 2, p)


def _rref_inplace(work: np.ndarray, p: int, ncols: int | None = None) -> list[int]:
    """Gauss-Jordan on ``work`` (modified in place); pivots only in the first ``ncols`` columns."""
    m, n = work.shape
    if ncols is None:
        ncols = n
    pivots: list[int] = []
    r = 0
    binary = p == 2
    for c in range(ncols):
        if r == m:
            break
        col = work[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            work[[r, pr]] = work[[pr, r]]
        if not binary:
            lead = int(work[r, c])
            if lead != 1:
                work[r, c:] = (work[r, c:] * inv_mod(lead, p)) % p
        rows = np.flatnonzero(work[:, c])
        rows = rows[rows != r]
        if rows.size:
            if binary:
                work[rows, c:] ^= work[r, c:]
            else:
                f = work[rows, c][:, None]
                work[rows, c:] = (work[rows, c:] - f * work[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots


def _work_copy(a: np.ndarray, p: int) -> np.ndarray:
    if p == 2:
        return np.array(a, dtype=np.uint8) & 1
    return np.array(a, dtype=DTYPE) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    work = _work_copy(a, p)
    pivots = _rref_inplace(work, p)
    return work.astype(DTYPE), pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the short side
    work = _work_copy(a.T if a.shape[0] > a.shape[1] else a, p)
    return len(_rref_inplace(work, p))


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : a x = 0} as the columns of an (ncols x nullity) matrix."""
    a = np.asarray(a)
    n = a.shape[1]
    if a.shape[0] == 0:
        return identity(n)
    work = _work_copy(a, p)
    pivots = _rref_inplace(work, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=DTYPE)
    if not free:
        return basis
    piv = np.array(pivots, dtype=np.intp)
    free_idx = np.array(free, dtype=np.intp)
    basis[free_idx, np.arange(len(free))] = 1
    if pivots:
        block = work[: len(pivots)][:, free_idx].astype(DTYPE)
        basis[piv, :] = (-block) % p
    return basis


@dataclass(frozen=True)
class LinearSolution:
    """A particular solution of ``A X = B`` together with a basis of ker A."""

    particular: np.ndarray
    nullspace_basis: list[np.ndarray]


def solve_linear(a: np.ndarray, b: np.ndarray, p: int) -> LinearSolution | None:
    """Solve ``a @ x = b`` exactly; ``None`` when the system is infeasible.

    Infeasibility is decided by rank: a pivot landing in the ``b`` columns
    means rank [a | b] > rank a.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ShapeError(f"row mismatch: A has {a.shape[0]} rows, B has {b.shape[0]}")
    m, n = a.shape
    k = b.shape[1]
    work = _work_copy(np.hstack([a, b]), p)
    pivots = _rref_inplace(work, p)
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, k), dtype=DTYPE)
    for i, c in enumerate(pivots):
        x[c] = work[i, n:]
    ns = nullspace(a, p) if m else identity(n)
    return LinearSolution(x, [ns[:, j : j + 1].copy() for j in range(ns.shape[1])])


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeError("inverse of a non-square matrix")
    work = _work_copy(np.hstack([a, identity(n)]), p)
    pivots = _rref_inplace(work, p, ncols=n)
    if len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return work[:, n:].astype(DTYPE)


def in_span(vectors: np.ndarray, target: np.ndarray, p: int) -> bool:
    """Whether each column of ``target`` lies in the column span of ``vectors``."""
    return solve_linear(vectors, target, p) is not None


def complement_columns(basis: np.ndarray, n: int, p: int) -> list[int]:
    """Unit vectors e_i (in index order) extending span(basis columns) to GF(p)^n."""
    if basis.size == 0:
        return list(range(n))
    _, pivots = rref(basis.T, p)
    taken = set(pivots)
    return [i for i in range(n) if i not in taken]


class EchelonSpace:
    """Incrementally grown subspace of GF(p)^n kept in reduced echelon form."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows = np.zeros((0, n), dtype=DTYPE)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.mod(np.asarray(v, dtype=DTYPE), self.p)
        if self.pivots:
            coeff = v[self.pivots]
            if coeff.any():
                v = np.mod(v - coeff @ self.rows, self.p)
        return v

    def add(self, v: np.ndarray) -> bool:
        """Insert ``v``; returns False when it was already in the span."""
        r = self.reduce(v)
        nz = np.flatnonzero(r)
        if nz.size == 0:
            return False
        c = int(nz[0])
        r = (r * inv_mod(int(r[c]), self.p)) % self.p
        if self.pivots:
            f = self.rows[:, c].copy()
            if f.any():
                self.rows = np.mod(self.rows - np.outer(f, r), self.p)
        order = np.searchsorted(self.pivots, c)
        self.rows = np.insert(self.rows, order, r, axis=0)
        self.pivots.insert(int(order), c)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()
