"""Matrices over a FieldSpec.

Two representations are used: ``Monomial`` for the permutation-with-
coefficients blocks the constructions are built from, and dense int64
numpy arrays for elimination. Elimination pivots on the first nonzero
entry in the lowest-indexed row, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CorruptionError, SingularError
from .galois import FieldSpec


@dataclass(frozen=True)
class Monomial:
    """Square matrix with one nonzero per row and column.

    Column ``c`` has its nonzero ``coef[c]`` in row ``perm[c]``.
    """

    perm: tuple[int, ...]
    coef: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Monomial":
        return cls(tuple(range(n)), (1,) * n)

    @property
    def size(self) -> int:
        return len(self.perm)

    def matmul(self, other: "Monomial", field: FieldSpec) -> "Monomial":
        """self @ other."""
        perm = tuple(self.perm[other.perm[c]] for c in range(other.size))
        coef = tuple(field.mul(other.coef[c], self.coef[other.perm[c]]) for c in range(other.size))
        return Monomial(perm, coef)

    def power(self, e: int, field: FieldSpec) -> "Monomial":
        out = Monomial.identity(self.size)
        for _ in range(e):
            out = self.matmul(out, field)
        return out

    def scale(self, c: int, field: FieldSpec) -> "Monomial":
        return Monomial(self.perm, tuple(field.mul(c, x) for x in self.coef))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=np.int64)
        out[list(self.perm), list(range(self.size))] = self.coef
        return out


def matmul(a: np.ndarray, b: np.ndarray, field: FieldSpec) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if not field.binary:
        return (a @ b) % field.p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for t in range(a.shape[1]):
        out ^= field.vmul(a[:, t, None], b[None, t, :])
    return out


def mat_power(a: np.ndarray, e: int, field: FieldSpec) -> np.ndarray:
    out = np.eye(a.shape[0], dtype=np.int64)
    for _ in range(e):
        out = matmul(a, out, field)
    return out


def block(grid, size: int) -> np.ndarray:
    """Assemble a dense matrix from a 2-D grid of blocks (None means zero)."""
    rows = []
    for grid_row in grid:
        rows.append(np.hstack([
            np.zeros((size, size), dtype=np.int64) if b is None else np.asarray(b, dtype=np.int64)
            for b in grid_row
        ]))
    return np.vstack(rows)


def row_reduce(a: np.ndarray, field: FieldSpec, rhs: np.ndarray | None = None):
    """Gauss-Jordan elimination.

    Returns ``(reduced, reduced_rhs, pivot_columns)``. The inputs are not
    modified.
    """
    m = np.array(a, dtype=np.int64, copy=True)
    b = None if rhs is None else np.array(rhs, dtype=np.int64, copy=True).reshape(m.shape[0], -1)
    nrows, ncols = m.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(m[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            m[[row, piv]] = m[[piv, row]]
            if b is not None:
                b[[row, piv]] = b[[piv, row]]
        inv = field.inv(int(m[row, col]))
        m[row] = field.vmul(m[row], inv)
        if b is not None:
            b[row] = field.vmul(b[row], inv)
        factors = m[:, col].copy()
        factors[row] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            f = factors[hit, None]
            m[hit] = field.vsub(m[hit], field.vmul(f, m[row][None, :]))
            if b is not None:
                b[hit] = field.vsub(b[hit], field.vmul(f, b[row][None, :]))
        pivots.append(col)
        row += 1
    return m, b, pivots


def rank(a: np.ndarray, field: FieldSpec) -> int:
    return len(row_reduce(a, field)[2])


def det(a: np.ndarray, field: FieldSpec) -> int:
    """Determinant by elimination (product of pivots with swap sign)."""
    m = np.array(a, dtype=np.int64, copy=True)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("determinant needs a square matrix")
    d = 1
    for col in range(n):
        nz = np.nonzero(m[col:, col])[0]
        if nz.size == 0:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
            d = field.neg(d)
        pv = int(m[col, col])
        d = field.mul(d, pv)
        inv = field.inv(pv)
        below = m[col + 1:, col].copy()
        hit = np.nonzero(below)[0] + col + 1
        if hit.size:
            f = field.vmul(m[hit, col], inv)[:, None]
            m[hit] = field.vsub(m[hit], field.vmul(f, m[col][None, :]))
    return d


def solve(a: np.ndarray, b: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Unique X with a @ X = b; ``a`` may be overdetermined.

    Raises SingularError if the solution is not unique and CorruptionError
    if the system is inconsistent.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    squeeze = b.ndim == 1
    red, rb, pivots = row_reduce(a, field, b)
    n = a.shape[1]
    if len(pivots) < n:
        raise SingularError(f"system has rank {len(pivots)} < {n} unknowns")
    if np.any(rb[n:] != 0):
        raise CorruptionError("linear system is inconsistent")
    x = rb[:n]
    return x[:, 0] if squeeze else x


def inverse(a: np.ndarray, field: FieldSpec) -> np.ndarray:
    n = a.shape[0]
    return solve(a, np.eye(n, dtype=np.int64), field)
