"""Array code with 1/r rebuilding access for every node.

Rows of a node are grouped into the weight classes X_0..X_{r-1}. Parity
``i`` applies the big block ``A_j^i`` to systematic column ``j``: an r x r
grid of small blocks in which block row ``x`` is nonzero only at block
column ``i`` (``p_j^(x-i)``) and block column ``x`` (``beta * p_j^(i-x)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arraycode import ArrayCode
from .code_c1 import check_explicit, check_lambdas
from .errors import ParamError
from .galois import FieldSpec
from .hypercube import check_size, hyperplane, prefix_sum, small_perm, weight_classes
from .linalg import Monomial
from .plan import Equation, Relation, RebuildPlan, make_plan, merge_terms, solve_components


def small_block_matrix(j: int, r: int, k: int, field: FieldSpec, coef: int | None = None) -> Monomial:
    """p_j as a matrix on X_0 positions.

    With ``coef=None`` the explicit rule applies: the entry in the column of
    X_0 vector ``v`` is the primitive element when ``v . (e_1+...+e_j) = 0``
    and 1 otherwise.
    """
    table = weight_classes(r, k)
    perm = small_perm(j, r, k).perm
    if coef is None:
        c = field.primitive
        coefs = tuple(c if prefix_sum(v, j, r, k) == 0 else 1 for v in table.x0)
    else:
        coefs = (coef,) * len(perm)
    return Monomial(perm, coefs)


def alpha_position(x: int, i: int, r: int) -> bool:
    """Whether the diagonal block in row x of A^i carries the factor alpha."""
    d = (x - i) % r
    return 0 < d < Fraction(r, 2) or (d == Fraction(r, 2) and i < Fraction(r, 2))


@dataclass(frozen=True)
class BigBlock:
    j: int
    i: int
    grid: tuple[tuple[Monomial | None, ...], ...]

    def to_dense(self) -> np.ndarray:
        from .linalg import block
        size = next(b.size for row in self.grid for b in row if b is not None)
        return block([[None if b is None else b.to_dense() for b in row] for row in self.grid], size)


@dataclass(frozen=True)
class C2Params:
    r: int
    k: int
    field: FieldSpec
    alpha: int | None = None  # defaults to the primitive element
    lambdas: tuple[int, ...] | None = None  # None selects the explicit rule
    strict: bool = True  # False admits alpha = 1 to demonstrate the degenerate code

    def __post_init__(self):
        if self.r < 2 or self.k < 3:
            raise ParamError(f"construction 2 needs r >= 2 and k >= 3, got r={self.r}, k={self.k}")
        check_size(self.r, self.k)
        alpha = self.field.primitive if self.alpha is None else self.field.check(self.alpha)
        if alpha == 0 or (alpha == 1 and self.strict):
            raise ParamError("alpha must differ from 0 and 1")
        object.__setattr__(self, "alpha", alpha)
        if self.lambdas is None:
            check_explicit(self.r, self.field)
        else:
            lam = tuple(self.lambdas)
            # a construction-1 vector of length k is accepted; its last entry is unused
            if len(lam) == self.k:
                lam = lam[:-1]
            object.__setattr__(self, "lambdas", check_lambdas(lam, self.k - 1, self.field))


class C2Code(ArrayCode):
    construction = 2

    def __init__(self, params: C2Params, validate: bool = True):
        self.params = params
        self.r, self.k, self.field = params.r, params.k, params.field
        self.table = weight_classes(self.r, self.k)
        self.small = tuple(
            small_block_matrix(j, self.r, self.k, self.field,
                               None if params.lambdas is None else params.lambdas[j - 1])
            for j in range(1, self.k)
        )
        self.small_powers = tuple(
            tuple(b.power(e, self.field) for e in range(self.r)) for b in self.small
        )
        if validate:
            self._validate()
        self.blocks = tuple(
            tuple(self.build_block(j, i) for i in range(self.r)) for j in range(1, self.k)
        )
        self.gen = tuple(self._parity_rows(i) for i in range(self.r))

    @property
    def q(self) -> int:
        return self.k - 1

    @property
    def alpha(self) -> int:
        return self.params.alpha

    @property
    def lambdas(self):
        return self.params.lambdas

    def _validate(self) -> None:
        from .decoder import subblock_criterion
        res = subblock_criterion(self.small, self.r, self.field)
        if not res.ok:
            scheme = "explicit-rule" if self.lambdas is None else "lambda"
            raise ParamError(
                f"{scheme} small blocks fail the sub-block invertibility check at power rows "
                f"{res.rows}, columns {tuple(c + 1 for c in res.cols)}; the code would not be MDS "
                "(choose lambda coefficients, e.g. from search-coeffs)")

    def build_block(self, j: int, i: int) -> BigBlock:
        if not 1 <= j < self.k:
            raise ParamError(f"systematic column {j} outside [1, {self.k - 1}]")
        if not 0 <= i < self.r:
            raise ParamError(f"parity {i} outside [0, {self.r})")
        pw = self.small_powers[j - 1]
        grid: list[list[Monomial | None]] = [[None] * self.r for _ in range(self.r)]
        for x in range(self.r):
            if x == i:
                grid[x][i] = pw[0]
                continue
            grid[x][i] = pw[(x - i) % self.r]
            diag = pw[(i - x) % self.r]
            grid[x][x] = diag.scale(self.alpha, self.field) if alpha_position(x, i, self.r) else diag
        return BigBlock(j, i, tuple(tuple(row) for row in grid))

    def _parity_rows(self, i: int):
        rows: list[list] = [[] for _ in range(self.p)]
        for j in range(1, self.k):
            grid = self.blocks[j - 1][i].grid
            for x in range(self.r):
                for c in range(self.r):
                    b = grid[x][c]
                    if b is None:
                        continue
                    for s in range(b.size):
                        rows[self.table.row(x, b.perm[s])].append((j, self.table.row(c, s), b.coef[s]))
        return tuple(tuple(row) for row in rows)

    def rebuild_systematic(self, j: int) -> RebuildPlan:
        """Read Y_j everywhere; the erased column falls out of paired equations."""
        if not 1 <= j <= self.q:
            raise ParamError(f"systematic node {j} outside [1, {self.q}]")
        access = hyperplane(j, self.r, self.k)
        equations = [
            Equation(self.parity_node(i), y, self.gen[i][y])
            for i in range(self.r) for y in access
        ]
        relations, sizes = solve_components(j, equations, self.field, self.is_parity)
        # unknowns pair up into 2x2 systems [[b, alpha*c], [b, c]]; solve_components
        # has already inverted each one, so only the pairing itself is checked here
        if max(sizes) > 2:
            raise AssertionError(f"rebuild of node {j} couples {max(sizes)} unknowns")
        plan = make_plan(j, self.p, self.n, relations, sizes)
        allowed = set(access)
        if any(not set(rows) <= allowed for rows in plan.reads.values()):
            raise AssertionError(f"rebuild of node {j} reads outside Y_{j}")
        return plan

    def rebuild_parity(self, e: int) -> RebuildPlan:
        """Read X_e everywhere.

        Block row e of parity e is a plain sum of systematic rows in X_e.
        Block row i' is recovered from parity i' block row e, which has the
        same unknown part up to a scalar, plus known systematic terms.
        """
        if not 0 <= e < self.r:
            raise ParamError(f"parity {e} outside [0, {self.r})")
        node = self.parity_node(e)
        known = set(self.table[e])
        relations = []
        for y in range(self.p):
            x, s = self.table.locate(y)
            target = self.gen[e][y]
            if x == e:
                relations.append(Relation((node, y), merge_terms(target, self.field)))
                continue
            w = self.table.row(e, s)
            helper = self.gen[x][w]
            scale = _cancel_factor(target, helper, known, self.field)
            terms = [(self.parity_node(x), w, scale)]
            terms += list(target)
            terms += [(jj, u, self.field.neg(self.field.mul(scale, c))) for jj, u, c in helper]
            merged = merge_terms(terms, self.field)
            stray = [(n, r) for n, r, _ in merged if not self.is_parity(n) and r not in known]
            if stray:
                raise AssertionError(f"parity {e} row {y}: unknown terms {stray} survive elimination")
            relations.append(Relation((node, y), merged, ((self.parity_node(x), w),)))
        return make_plan(node, self.p, self.n, relations)

    def rebuild(self, node: int) -> RebuildPlan:
        self.check_node(node)
        if self.is_parity(node):
            return self.rebuild_parity(self.parity_index(node))
        return self.rebuild_systematic(node)


def _cancel_factor(target, helper, known, field: FieldSpec) -> int:
    """Scalar s such that target - s*helper has no terms outside ``known`` rows."""
    h = {(j, u): c for j, u, c in helper if u not in known}
    for j, u, c in target:
        if u not in known:
            return field.div(c, h[j, u])
    raise AssertionError("row has no unknown terms")  # pragma: no cover


def c2_build(params: C2Params) -> C2Code:
    return C2Code(params)


def c2_small_block(j: int, params: C2Params) -> Monomial:
    if not 1 <= j < params.k:
        raise ParamError(f"systematic column {j} outside [1, {params.k - 1}]")
    coef = None if params.lambdas is None else params.lambdas[j - 1]
    return small_block_matrix(j, params.r, params.k, params.field, coef)


def c2_build_block(j: int, i: int, params: C2Params) -> BigBlock:
    return C2Code(params, validate=False).build_block(j, i)


def c2_encode(code: C2Code, info):
    return code.encode(info)


def c2_rebuild(code: C2Code, node: int):
    plan = code.rebuild(node)
    return plan, plan.report()
