"""Behaviour shared by both constructions.

Nodes are numbered from 1: nodes ``1..q`` are systematic and node
``q + 1 + l`` holds parity ``l``. A codeword column is indexed by the row
integer (equivalently its base-r vector), never by a reordered position.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import ParamError
from .galois import FieldSpec
from .plan import AccessReport, RebuildPlan

GenRow = tuple[tuple[int, int, int], ...]  # (systematic node, row, coefficient)


class ArrayCode:
    construction: int
    r: int
    k: int
    field: FieldSpec
    # gen[l][y]: expansion of parity l, row y over information symbols
    gen: tuple[tuple[GenRow, ...], ...]

    @property
    def p(self) -> int:
        return self.r**self.k

    @property
    def q(self) -> int:
        raise NotImplementedError

    @property
    def n(self) -> int:
        return self.q + self.r

    @property
    def alpha(self) -> int:
        return 0

    @property
    def lambdas(self) -> tuple[int, ...] | None:
        return None

    def is_parity(self, node: int) -> bool:
        return node > self.q

    def parity_node(self, l: int) -> int:
        return self.q + 1 + l

    def parity_index(self, node: int) -> int:
        return node - self.q - 1

    def check_node(self, node: int) -> int:
        if not 1 <= node <= self.n:
            raise ParamError(f"node {node} outside [1, {self.n}]")
        return node

    @cached_property
    def _gather(self):
        width = max(len(row) for rows in self.gen for row in rows)
        out = []
        for rows in self.gen:
            j = np.zeros((self.p, width), dtype=np.int64)
            u = np.zeros((self.p, width), dtype=np.int64)
            c = np.zeros((self.p, width), dtype=np.int64)
            for y, row in enumerate(rows):
                for w, (node, src, coef) in enumerate(row):
                    j[y, w], u[y, w], c[y, w] = node - 1, src, coef
            out.append((j, u, c))
        return out

    def encode(self, info) -> np.ndarray:
        """Parity array of shape (p, r, ...) for info of shape (p, q, ...)."""
        info = self.field.asarray(info)
        if info.shape[:2] != (self.p, self.q):
            raise ParamError(f"information array must have shape ({self.p}, {self.q}, ...), got {info.shape}")
        extra = info.shape[2:]
        out = np.zeros((self.p, self.r) + extra, dtype=np.int64)
        for l, (j, u, c) in enumerate(self._gather):
            gathered = info[u, j]
            coef = c.reshape(c.shape + (1,) * len(extra))
            out[:, l] = self.field.vsum(self.field.vmul(coef, gathered), axis=1)
        return out

    def codeword(self, info) -> np.ndarray:
        """Full (p, n, ...) array: systematic columns then parities."""
        info = self.field.asarray(info)
        return np.concatenate([info, self.encode(info)], axis=1)

    def parity_matrix(self, l: int) -> np.ndarray:
        """Dense (p, q*p) matrix of parity l; column (j-1)*p + u is a_{u,j}."""
        out = np.zeros((self.p, self.q * self.p), dtype=np.int64)
        for y, row in enumerate(self.gen[l]):
            for node, u, coef in row:
                out[y, (node - 1) * self.p + u] = self.field.add(int(out[y, (node - 1) * self.p + u]), coef)
        return out

    def generator(self) -> np.ndarray:
        """Dense (n*p, q*p) systematic generator matrix."""
        top = np.eye(self.q * self.p, dtype=np.int64)
        return np.vstack([top] + [self.parity_matrix(l) for l in range(self.r)])

    def rebuild(self, node: int) -> RebuildPlan:
        raise NotImplementedError

    def report(self, node: int) -> AccessReport:
        return self.rebuild(node).report()

    def describe(self) -> dict:
        return {
            "construction": self.construction,
            "r": self.r,
            "k": self.k,
            "field": str(self.field),
            "alpha": self.alpha or None,
            "lambda": list(self.lambdas) if self.lambdas is not None else None,
            "rows": self.p,
            "nodes": self.n,
        }
