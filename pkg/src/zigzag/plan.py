"""Rebuild plans: which rows to read from each surviving node and the
explicit linear relations that recover every erased element from them."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import SingularError
from .galois import FieldSpec
from .linalg import inverse, rank

Term = tuple[int, int, int]  # (node, row, coefficient)


@dataclass(frozen=True)
class Relation:
    """``target = sum(coef * symbol[node][row] for node, row, coef in terms)``."""

    target: tuple[int, int]
    terms: tuple[Term, ...]
    parity: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class AccessReport:
    erased: int
    accessed: dict[int, int]
    remaining: int

    @property
    def total(self) -> int:
        return sum(self.accessed.values())

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.total, self.remaining)

    @property
    def ratio_float(self) -> float:
        return float(self.ratio)

    def to_dict(self) -> dict:
        return {
            "node": self.erased,
            "accessed": self.total,
            "remaining": self.remaining,
            "per_node": {str(n): c for n, c in sorted(self.accessed.items())},
            "ratio": {"num": self.ratio.numerator, "den": self.ratio.denominator},
            "ratio_float": self.ratio_float,
        }


@dataclass(frozen=True)
class RebuildPlan:
    erased: int
    rows: int
    nodes: int
    reads: dict[int, tuple[int, ...]]
    relations: tuple[Relation, ...]
    component_sizes: tuple[int, ...] = dc_field(default=())

    def accessed(self, node: int) -> int:
        return len(self.reads.get(node, ()))

    def report(self) -> AccessReport:
        counts = {n: len(self.reads.get(n, ())) for n in range(1, self.nodes + 1) if n != self.erased}
        return AccessReport(self.erased, counts, (self.nodes - 1) * self.rows)

    def execute(self, columns: Mapping[int, np.ndarray], field: FieldSpec) -> np.ndarray:
        """Recover the erased column; ``columns[node]`` has shape (rows, ...).

        Only the rows listed in ``reads`` are touched.
        """
        sample = next(iter(columns.values()))
        out = np.zeros((self.rows,) + np.shape(sample)[1:], dtype=np.int64)
        for rel in self.relations:
            acc = np.zeros(np.shape(sample)[1:], dtype=np.int64)
            for node, row, coef in rel.terms:
                acc = field.vadd(acc, field.vmul(coef, np.asarray(columns[node])[row]))
            out[rel.target[1]] = acc
        return out


def merge_terms(terms: Iterable[Term], field: FieldSpec) -> tuple[Term, ...]:
    acc: dict[tuple[int, int], int] = defaultdict(int)
    for node, row, coef in terms:
        acc[node, row] = field.add(acc[node, row], coef)
    return tuple((n, r, c) for (n, r), c in sorted(acc.items()) if c)


def make_plan(erased: int, rows: int, nodes: int, relations: Sequence[Relation],
              component_sizes: Sequence[int] = ()) -> RebuildPlan:
    targets = [rel.target[1] for rel in relations]
    if sorted(targets) != list(range(rows)):
        raise AssertionError(f"plan for node {erased} does not cover every row exactly once")
    reads: dict[int, set[int]] = defaultdict(set)
    for rel in relations:
        for node, row, _ in rel.terms:
            if node == erased:
                raise AssertionError("relation reads the erased node")
            reads[node].add(row)
    return RebuildPlan(
        erased, rows, nodes,
        {n: tuple(sorted(rs)) for n, rs in sorted(reads.items())},
        tuple(sorted(relations, key=lambda rel: rel.target[1])),
        tuple(component_sizes),
    )


@dataclass
class Equation:
    """An observed symbol and its expansion: ``symbol[node][row] = sum(terms)``."""

    node: int
    row: int
    terms: tuple[Term, ...]


def solve_components(erased: int, equations: Sequence[Equation], field: FieldSpec,
                     is_parity) -> tuple[list[Relation], list[int]]:
    """Express each erased element through the observed symbols.

    Unknowns are the terms of ``equations`` on the erased node. Equations
    are grouped into connected components by shared unknowns and each
    component is solved on its own; every unknown gets exactly one relation.
    """
    parent: dict[int, int] = {}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    unknowns_of = []
    for eq in equations:
        us = [row for node, row, _ in eq.terms if node == erased]
        for u in us:
            parent.setdefault(u, u)
        for u in us[1:]:
            parent[find(u)] = find(us[0])
        unknowns_of.append(us)

    groups: dict[int, list[int]] = defaultdict(list)
    for idx, us in enumerate(unknowns_of):
        if us:
            groups[find(us[0])].append(idx)

    relations: list[Relation] = []
    sizes: list[int] = []
    for root in sorted(groups):
        eq_idx = groups[root]
        unknowns = sorted({u for i in eq_idx for u in unknowns_of[i]})
        col = {u: c for c, u in enumerate(unknowns)}
        m = np.zeros((len(eq_idx), len(unknowns)), dtype=np.int64)
        for r_i, i in enumerate(eq_idx):
            for node, row, coef in equations[i].terms:
                if node == erased:
                    m[r_i, col[row]] = field.add(int(m[r_i, col[row]]), coef)
        chosen: list[int] = []
        for r_i in range(len(eq_idx)):
            if rank(m[chosen + [r_i]], field) == len(chosen) + 1:
                chosen.append(r_i)
            if len(chosen) == len(unknowns):
                break
        if len(chosen) < len(unknowns):
            raise SingularError(
                f"unknowns {unknowns} of node {erased} are not determined by the accessed equations")
        inv = inverse(m[chosen], field)
        for c, u in enumerate(unknowns):
            terms: list[Term] = []
            for pos, r_i in enumerate(chosen):
                w = int(inv[c, pos])
                if not w:
                    continue
                eq = equations[eq_idx[r_i]]
                terms.append((eq.node, eq.row, w))
                for node, row, coef in eq.terms:
                    if node != erased:
                        terms.append((node, row, field.neg(field.mul(w, coef))))
            merged = merge_terms(terms, field)
            relations.append(Relation(
                (erased, u), merged, tuple((n, r) for n, r, _ in merged if is_parity(n))))
        sizes.append(len(unknowns))
    return relations, sizes
