"""Arithmetic in GF(p) and GF(2^m).

Field elements are plain ints in ``[0, order)``. For GF(2^m) the bits of an
element are the coefficients of its polynomial representative. Scalar
operations are computed directly (modular or carry-less arithmetic); the
vectorized ``v*`` helpers act on numpy arrays and use log/exp tables for
GF(2^m), which produce identical results.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import FieldError

MAX_PRIME = 1 << 16
MAX_DEGREE = 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _clmul(a: int, b: int) -> int:
    res = 0
    while b:
        if b & 1:
            res ^= a
        a <<= 1
        b >>= 1
    return res


def _poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2 over GF(2)."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, q) == 0:
                return False
    return True


def _poly_pow_mod(base: int, e: int, m: int) -> int:
    res = 1
    base = _poly_mod(base, m)
    while e:
        if e & 1:
            res = _poly_mod(_clmul(res, base), m)
        base = _poly_mod(_clmul(base, base), m)
        e >>= 1
    return res


def is_primitive_poly(poly: int) -> bool:
    deg = poly.bit_length() - 1
    if not is_irreducible(poly):
        return False
    order = (1 << deg) - 1
    return all(_poly_pow_mod(2, order // q, poly) != 1 for q in prime_factors(order)) if order > 1 else True


@lru_cache(maxsize=None)
def default_poly(m: int) -> int:
    """Smallest primitive polynomial of degree m (0x11D for m=8)."""
    for poly in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_primitive_poly(poly):
            return poly
    raise FieldError(f"no primitive polynomial of degree {m}")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int = 1
    poly: int = 0

    def __post_init__(self):
        if not is_prime(self.p) or self.p > MAX_PRIME:
            raise FieldError(f"characteristic must be a prime <= {MAX_PRIME}, got {self.p}")
        if self.m < 1 or self.m > MAX_DEGREE:
            raise FieldError(f"degree must be in [1, {MAX_DEGREE}], got {self.m}")
        if self.m > 1:
            if self.p != 2:
                raise FieldError("extension fields are only supported in characteristic 2")
            if self.poly.bit_length() - 1 != self.m:
                raise FieldError(f"reduction polynomial {self.poly:#x} does not have degree {self.m}")
            if not is_irreducible(self.poly):
                raise FieldError(f"reduction polynomial {self.poly:#x} is reducible")
        elif self.poly:
            raise FieldError("prime fields take no reduction polynomial")

    @classmethod
    def gf2e(cls, m: int, poly: int | None = None) -> "FieldSpec":
        if m == 1:
            return cls(2)
        return cls(2, m, default_poly(m) if poly is None else poly)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``gf3``, ``gf4``, ``gfp:<p>``, ``gf2e<m>`` or ``gf2e<m>:<poly-hex>``."""
        s = text.strip().lower()
        if s == "gf3":
            return cls(3)
        if s == "gf4":
            return cls.gf2e(2)
        if mt := re.fullmatch(r"gfp:(\d+)", s):
            return cls(int(mt.group(1)))
        if mt := re.fullmatch(r"gf2e(\d+)(?::(?:0x)?([0-9a-f]+))?", s):
            m = int(mt.group(1))
            poly = int(mt.group(2), 16) if mt.group(2) else None
            return cls.gf2e(m, poly)
        raise FieldError(f"unrecognised field {text!r}")

    def __str__(self) -> str:
        if self.m == 1:
            return "gf3" if self.p == 3 else f"gfp:{self.p}"
        if self.m == 2 and self.poly == 0x7:
            return "gf4"
        if self.poly == default_poly(self.m):
            return f"gf2e{self.m}"
        return f"gf2e{self.m}:{self.poly:x}"

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def binary(self) -> bool:
        return self.p == 2

    def check(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.order:
            raise FieldError(f"{a!r} is not an element of {self}")
        return int(a)

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        return a ^ b if self.binary else (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        return a ^ b if self.binary else (a - b) % self.p

    def neg(self, a: int) -> int:
        a = self.check(a)
        return a if self.binary else (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        if self.m == 1:
            return (a * b) % self.p
        return _poly_mod(_clmul(a, b), self.poly)

    def pow(self, a: int, e: int) -> int:
        a = self.check(a)
        if e < 0:
            a, e = self.inv(a), -e
        res = 1
        while e:
            if e & 1:
                res = self.mul(res, a)
            a = self.mul(a, a)
            e >>= 1
        return res

    def inv(self, a: int) -> int:
        a = self.check(a)
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def mult_order(self, a: int) -> int:
        a = self.check(a)
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        n = self.order - 1
        for q in prime_factors(n):
            while n % q == 0 and self.pow(a, n // q) == 1:
                n //= q
        return n

    @cached_property
    def primitive(self) -> int:
        if self.order < 3:
            raise FieldError(f"{self} has no primitive element distinct from 1")
        n = self.order - 1
        qs = prime_factors(n)
        for g in range(2, self.order):
            if all(self.pow(g, n // q) != 1 for q in qs):
                return g
        raise FieldError(f"no generator found in {self}")  # pragma: no cover

    # -- vectorized arithmetic --------------------------------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.order - 1
        exp = np.zeros(2 * n, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        g = self.primitive if self.order > 2 else 1
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self.mul(x, g)
        exp[n:] = exp[:n]
        return exp, log

    def asarray(self, a) -> np.ndarray:
        arr = np.asarray(a, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise FieldError(f"array has entries outside {self}")
        return arr

    def vadd(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        return a ^ b if self.binary else (a + b) % self.p

    def vsub(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        return a ^ b if self.binary else (a - b) % self.p

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        exp, log = self._tables
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")
        if self.m == 1:
            return np.array([pow(int(x), self.p - 2, self.p) for x in a.ravel()], dtype=np.int64).reshape(a.shape)
        exp, log = self._tables
        return exp[(self.order - 1 - log[a]) % (self.order - 1)]

    def vsum(self, a, axis=None) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.binary:
            return np.bitwise_xor.reduce(a, axis=axis)
        return a.sum(axis=axis) % self.p

    def random(self, rng: np.random.Generator, shape, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.order, size=shape, dtype=np.int64)


GF3 = FieldSpec(3)
GF4 = FieldSpec.gf2e(2)
GF16 = FieldSpec.gf2e(4)
GF256 = FieldSpec.gf2e(8)


def gf_add(a: int, b: int, f: FieldSpec) -> int:
    return f.add(a, b)


def gf_mul(a: int, b: int, f: FieldSpec) -> int:
    return f.mul(a, b)


def gf_inv(a: int, f: FieldSpec) -> int:
    return f.inv(a)


def gf_pow(a: int, e: int, f: FieldSpec) -> int:
    return f.pow(a, e)


def primitive_element(f: FieldSpec) -> int:
    """Smallest generator of the multiplicative group of ``f``."""
    return f.primitive
