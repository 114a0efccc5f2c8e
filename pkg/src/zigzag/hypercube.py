"""Index combinatorics on Z_r^k.

A row index ``x`` in ``[0, r**k)`` doubles as a length-k vector of base-r
digits. Digit 1 is the most significant, so the unit vector ``e_j`` is the
integer ``r**(k-j)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import ParamError, SizeCapError

DEFAULT_MAX_PK = 1 << 20


def max_rows() -> int:
    env = os.environ.get("ZZ_MAX_PK")
    return int(env) if env else DEFAULT_MAX_PK


def check_size(r: int, k: int) -> int:
    if r < 2 or k < 1:
        raise ParamError(f"need r >= 2 and k >= 1, got r={r}, k={k}")
    p = r**k
    if p > max_rows():
        raise SizeCapError(f"r^k = {p} exceeds the row cap {max_rows()} (set ZZ_MAX_PK to raise it)")
    return p


def _check_index(x: int, r: int, k: int) -> None:
    if not 0 <= x < r**k:
        raise ParamError(f"row index {x} outside [0, {r**k})")


def _check_column(j: int, k: int) -> None:
    if not 1 <= j <= k:
        raise ParamError(f"column {j} outside [1, {k}]")


def int_to_vec(x: int, r: int, k: int) -> tuple[int, ...]:
    _check_index(x, r, k)
    digits = []
    for _ in range(k):
        x, d = divmod(x, r)
        digits.append(d)
    return tuple(reversed(digits))


def vec_to_int(v, r: int) -> int:
    x = 0
    for d in v:
        if not 0 <= d < r:
            raise ParamError(f"digit {d} outside [0, {r})")
        x = x * r + d
    return x


def unit(j: int, r: int, k: int) -> int:
    """Integer form of the standard basis vector e_j."""
    _check_column(j, k)
    return r ** (k - j)


def vadd(x: int, y: int, r: int, k: int) -> int:
    """Digitwise sum mod r."""
    return vec_to_int([(a + b) % r for a, b in zip(int_to_vec(x, r, k), int_to_vec(y, r, k))], r)


def vscale(x: int, c: int, r: int, k: int) -> int:
    return vec_to_int([(c * a) % r for a in int_to_vec(x, r, k)], r)


def digit(x: int, j: int, r: int, k: int) -> int:
    return (x // r ** (k - j)) % r


def dot(x: int, y: int, r: int, k: int) -> int:
    return sum(a * b for a, b in zip(int_to_vec(x, r, k), int_to_vec(y, r, k))) % r


def prefix_sum(x: int, j: int, r: int, k: int) -> int:
    """x . (e_1 + ... + e_j) in Z_r."""
    return sum(int_to_vec(x, r, k)[:j]) % r


def apply_f(x: int, j: int, l: int, r: int, k: int) -> int:
    """The zigzag permutation f_j^l(x) = x + l*e_j."""
    _check_index(x, r, k)
    _check_column(j, k)
    if not 0 <= l < r:
        raise ParamError(f"parity index {l} outside [0, {r})")
    d = digit(x, j, r, k)
    return x + (((d + l) % r) - d) * r ** (k - j)


@dataclass(frozen=True)
class WeightClassTable:
    """Weight classes X_0..X_{r-1}; X_i[s] = X_0[s] + i*e_k, X_0 ascending."""

    r: int
    k: int
    classes: tuple[tuple[int, ...], ...]
    ordering: str = "ascending"

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.classes[i]

    @property
    def size(self) -> int:
        return self.r ** (self.k - 1)

    @property
    def x0(self) -> tuple[int, ...]:
        return self.classes[0]

    def locate(self, x: int) -> tuple[int, int]:
        """(class index, position) of row x."""
        return self._where[x]

    @cached_property
    def _where(self) -> dict[int, tuple[int, int]]:
        return {x: (i, s) for i, cls in enumerate(self.classes) for s, x in enumerate(cls)}

    def position(self, x: int) -> int:
        return self._where[x][1]

    def row(self, i: int, s: int) -> int:
        return self.classes[i % self.r][s]


@lru_cache(maxsize=64)
def weight_classes(r: int, k: int) -> WeightClassTable:
    if r < 2 or k < 2:
        raise ParamError(f"weight classes need r >= 2 and k >= 2, got r={r}, k={k}")
    p = check_size(r, k)
    x0 = tuple(x for x in range(p) if sum(int_to_vec(x, r, k)) % r == 0)
    # last digit of e_k is the units place, so adding i*e_k is a mod-r bump of x % r
    classes = tuple(
        tuple(x - x % r + (x % r + i) % r for x in x0) for i in range(r)
    )
    return WeightClassTable(r, k, classes)


@lru_cache(maxsize=256)
def hyperplane(j: int, r: int, k: int) -> tuple[int, ...]:
    """Y_j: rows whose j-th digit is zero."""
    _check_column(j, k)
    p = check_size(r, k)
    return tuple(x for x in range(p) if digit(x, j, r, k) == 0)


@dataclass(frozen=True)
class SmallPerm:
    """Permutation of X_0 positions: s -> position of X_0[s] + e_j - e_k."""

    j: int
    perm: tuple[int, ...]

    def __call__(self, s: int) -> int:
        return self.perm[s]

    def power(self, e: int) -> "SmallPerm":
        out = list(range(len(self.perm)))
        for _ in range(e):
            out = [self.perm[s] for s in out]
        return SmallPerm(self.j, tuple(out))


@lru_cache(maxsize=256)
def small_perm(j: int, r: int, k: int) -> SmallPerm:
    _check_column(j, k)
    table = weight_classes(r, k)
    shift = vadd(unit(j, r, k), vscale(unit(k, r, k), r - 1, r, k), r, k)
    return SmallPerm(j, tuple(table.position(vadd(v, shift, r, k)) for v in table.x0))
