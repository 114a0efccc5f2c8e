"""Zigzag code with optimal systematic rebuilding.

Parity ``l`` row ``t`` combines every ``a[i, j]`` with ``i + l*e_j = t``.
The coefficient pattern is carried by the modified permutation matrices
``P_j`` and their true matrix powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .arraycode import ArrayCode
from .errors import ParamError
from .galois import GF3, GF4, FieldSpec
from .hypercube import apply_f, check_size, hyperplane, prefix_sum
from .linalg import Monomial
from .plan import Equation, Relation, RebuildPlan, make_plan, solve_components


def explicit_field(r: int) -> FieldSpec:
    """The field the explicit coefficient rule is defined over (r = 2 or 3)."""
    if r == 2:
        return GF3
    if r == 3:
        return GF4
    raise ParamError(f"the explicit coefficient rule exists only for r in (2, 3), got r={r}; use lambda coefficients")


def check_explicit(r: int, field: FieldSpec) -> int:
    want = explicit_field(r)
    if field != want:
        raise ParamError(f"the explicit coefficient rule for r={r} needs {want}, got {field}")
    return field.primitive


def check_lambdas(lambdas, count: int, field: FieldSpec) -> tuple[int, ...]:
    lambdas = tuple(int(x) for x in lambdas)
    if len(lambdas) != count:
        raise ParamError(f"expected {count} lambda coefficients, got {len(lambdas)}")
    for x in lambdas:
        field.check(x)
        if x == 0:
            raise ParamError("lambda coefficients must be nonzero")
    return lambdas


@dataclass(frozen=True)
class C1Params:
    r: int
    k: int
    field: FieldSpec
    lambdas: tuple[int, ...] | None = None  # None selects the explicit rule

    def __post_init__(self):
        if self.r < 2 or self.k < 2:
            raise ParamError(f"construction 1 needs r >= 2 and k >= 2, got r={self.r}, k={self.k}")
        check_size(self.r, self.k)
        if self.lambdas is None:
            check_explicit(self.r, self.field)
        else:
            object.__setattr__(self, "lambdas", check_lambdas(self.lambdas, self.k, self.field))


class C1Code(ArrayCode):
    construction = 1

    def __init__(self, params: C1Params):
        self.params = params
        self.r, self.k, self.field = params.r, params.k, params.field
        self.P = tuple(self._perm_matrix(j) for j in range(1, self.k + 1))
        self.powers = tuple(
            tuple(P.power(l, self.field) for l in range(self.r)) for P in self.P
        )
        self.gen = tuple(self._parity_rows(l) for l in range(self.r))

    @property
    def q(self) -> int:
        return self.k

    @property
    def lambdas(self):
        return self.params.lambdas

    def coefficient(self, j: int, col: int) -> int:
        """Nonzero entry of column ``col`` of P_j."""
        if self.lambdas is not None:
            return self.lambdas[j - 1]
        return self.field.primitive if prefix_sum(col, j, self.r, self.k) == 0 else 1

    def _perm_matrix(self, j: int) -> Monomial:
        cols = range(self.p)
        return Monomial(
            tuple(apply_f(c, j, 1, self.r, self.k) for c in cols),
            tuple(self.coefficient(j, c) for c in cols),
        )

    def _parity_rows(self, l: int):
        rows: list[list] = [[] for _ in range(self.p)]
        for j in range(1, self.k + 1):
            P = self.powers[j - 1][l]
            for u in range(self.p):
                rows[P.perm[u]].append((j, u, P.coef[u]))
        return tuple(tuple(row) for row in rows)

    def zigzag_set(self, t: int, l: int) -> tuple[tuple[int, int], ...]:
        """Information positions (row, column) combined in parity l, row t."""
        return tuple((u, j) for j, u, _ in self.gen[l][t])

    @cached_property
    def small_blocks(self) -> tuple[Monomial, ...] | None:
        """Per-column small blocks when every block of P_j is the same.

        This holds for lambda coefficients; under the explicit rule the last
        column's blocks differ between weight classes and None is returned.
        """
        from .code_c2 import small_block_matrix
        if self.lambdas is None:
            return None
        return tuple(small_block_matrix(j, self.r, self.k, self.field, self.lambdas[j - 1])
                     for j in range(1, self.k + 1))

    def rebuild_systematic(self, j: int) -> RebuildPlan:
        if not 1 <= j <= self.k:
            raise ParamError(f"systematic node {j} outside [1, {self.k}]")
        access = hyperplane(j, self.r, self.k)
        equations = [
            Equation(self.parity_node(l), y, self.gen[l][y])
            for l in range(self.r) for y in access
        ]
        relations, sizes = solve_components(j, equations, self.field, self.is_parity)
        plan = make_plan(j, self.p, self.n, relations, sizes)
        allowed = set(access)
        if any(not set(rows) <= allowed for rows in plan.reads.values()):
            raise AssertionError(f"rebuild of node {j} reads outside Y_{j}")
        return plan

    def rebuild_parity(self, l: int) -> RebuildPlan:
        if not 0 <= l < self.r:
            raise ParamError(f"parity {l} outside [0, {self.r})")
        node = self.parity_node(l)
        relations = [Relation((node, y), tuple(self.gen[l][y])) for y in range(self.p)]
        return make_plan(node, self.p, self.n, relations)

    def rebuild(self, node: int) -> RebuildPlan:
        self.check_node(node)
        if self.is_parity(node):
            return self.rebuild_parity(self.parity_index(node))
        return self.rebuild_systematic(node)


def c1_build(params: C1Params) -> C1Code:
    return C1Code(params)


def c1_encode(code: C1Code, info):
    return code.encode(info)


def c1_rebuild_systematic(code: C1Code, j: int) -> RebuildPlan:
    return code.rebuild_systematic(j)


def c1_rebuild_parity(code: C1Code, l: int) -> RebuildPlan:
    return code.rebuild_parity(l)
