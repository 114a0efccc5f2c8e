"""Erasure decoding, exhaustive MDS verification and coefficient search."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from .arraycode import ArrayCode
from .errors import NotMDSError, ParamError, SearchFailure, SingularError, SizeCapError
from .galois import FieldSpec
from .linalg import Monomial, block, mat_power, matmul, rank, solve

MAX_PATTERNS = 10**4
MAX_SOLVE_DIM = 4096


# -- decoding ---------------------------------------------------------------

def _check_pattern(code: ArrayCode, pattern) -> tuple[int, ...]:
    pat = tuple(sorted(set(int(x) for x in pattern)))
    if len(pat) != len(tuple(pattern)):
        raise ParamError(f"erasure pattern {pattern} repeats a node")
    for node in pat:
        code.check_node(node)
    if len(pat) > code.r:
        raise ParamError(f"{len(pat)} erasures exceed the {code.r} the code can correct")
    return pat


def _parity_matrices(code: ArrayCode) -> list[np.ndarray]:
    cache = code.__dict__.setdefault("_dense_parity", {})
    for l in range(code.r):
        if l not in cache:
            cache[l] = code.parity_matrix(l)
    return [cache[l] for l in range(code.r)]


def erasure_system(code: ArrayCode, pattern) -> tuple[np.ndarray, list[int], list[int]]:
    """Coefficient matrix of the unknown systematic columns in the surviving parities.

    Returns ``(matrix, unknown_nodes, surviving_parities)``.
    """
    pat = set(_check_pattern(code, pattern))
    unknown = [j for j in range(1, code.q + 1) if j in pat]
    parities = [l for l in range(code.r) if code.parity_node(l) not in pat]
    mats = _parity_matrices(code)
    p = code.p
    cols = np.concatenate([np.arange((j - 1) * p, j * p) for j in unknown]) if unknown else np.zeros(0, dtype=np.int64)
    a = np.vstack([mats[l][:, cols] for l in parities]) if parities else np.zeros((0, cols.size), dtype=np.int64)
    return a, unknown, parities


def decode_erasures(code: ArrayCode, surviving: Mapping[int, np.ndarray], pattern) -> np.ndarray:
    """Recover the (p, q, ...) information array from the surviving columns.

    ``surviving`` maps node -> column of shape (p, ...) and must contain every
    node outside ``pattern``.
    """
    pat = _check_pattern(code, pattern)
    f = code.field
    missing = [n for n in range(1, code.n + 1) if n not in pat and n not in surviving]
    if missing:
        raise ParamError(f"surviving columns for nodes {missing} were not supplied")
    sample = np.asarray(surviving[next(n for n in range(1, code.n + 1) if n not in pat)])
    extra = sample.shape[1:]
    flat = int(np.prod(extra)) if extra else 1
    cols = {n: f.asarray(np.asarray(surviving[n])).reshape(code.p, flat) for n in surviving if n not in pat}

    a, unknown, parities = erasure_system(code, pattern)
    info = np.zeros((code.p, code.q, flat), dtype=np.int64)
    for j in range(1, code.q + 1):
        if j not in unknown:
            info[:, j - 1] = cols[j]
    if unknown:
        if a.shape[1] > MAX_SOLVE_DIM:
            raise SizeCapError(f"decode system has {a.shape[1]} unknowns, cap is {MAX_SOLVE_DIM}")
        mats = _parity_matrices(code)
        known_nodes = [j for j in range(1, code.q + 1) if j not in unknown]
        known_cols = np.concatenate([np.arange((j - 1) * code.p, j * code.p) for j in known_nodes]) \
            if known_nodes else np.zeros(0, dtype=np.int64)
        known_vals = np.vstack([cols[j] for j in known_nodes]) if known_nodes else None
        rhs = []
        for l in parities:
            obs = cols[code.parity_node(l)]
            if known_vals is not None:
                obs = f.vsub(obs, matmul(mats[l][:, known_cols], known_vals, f))
            rhs.append(obs)
        b = np.vstack(rhs) if rhs else np.zeros((0, flat), dtype=np.int64)
        try:
            x = solve(a, b, f)
        except SingularError as exc:
            raise NotMDSError(pat) from exc
        for idx, j in enumerate(unknown):
            info[:, j - 1] = x[idx * code.p:(idx + 1) * code.p]
    return info.reshape((code.p, code.q) + extra)


# -- MDS verification -------------------------------------------------------

@dataclass
class MDSResult:
    ok: bool
    checked: int
    pattern: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _probe(code: ArrayCode, pattern: tuple[int, ...], seed: int, index: int) -> str | None:
    rng = np.random.default_rng([seed, index])
    info = code.field.random(rng, (code.p, code.q))
    if not info.any():
        info[0, 0] = 1
    word = code.codeword(info)
    surviving = {n: word[:, n - 1] for n in range(1, code.n + 1) if n not in pattern}
    try:
        got = decode_erasures(code, surviving, pattern)
    except NotMDSError:
        got = None
    if got is not None and np.array_equal(got, info):
        return None
    # confirm with the exact rank of the erasure system
    a, unknown, _ = erasure_system(code, pattern)
    if rank(a, code.field) < a.shape[1]:
        return f"erasure system has rank {rank(a, code.field)} < {a.shape[1]}"
    return "decoded data differs from the encoded data"


def verify_mds(code: ArrayCode, seed: int = 0, workers: int = 1, cap: int = MAX_PATTERNS) -> MDSResult:
    """Decode a random codeword under every pattern of exactly r erasures."""
    total = math.comb(code.n, code.r)
    if total > cap:
        raise SizeCapError(f"C({code.n},{code.r}) = {total} patterns exceed the cap {cap}")
    patterns = list(itertools.combinations(range(1, code.n + 1), code.r))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reasons = list(pool.map(lambda ip: _probe(code, ip[1], seed, ip[0]), enumerate(patterns)))
    else:
        reasons = []
        for idx, pat in enumerate(patterns):
            reasons.append(_probe(code, pat, seed, idx))
            if reasons[-1] is not None:
                break
    for idx, reason in enumerate(reasons):
        if reason is not None:
            return MDSResult(False, idx + 1, patterns[idx], reason)
    return MDSResult(True, total)


# -- sub-block criterion ----------------------------------------------------

@dataclass
class CriterionResult:
    ok: bool
    checked: int
    rows: tuple[int, ...] | None = None
    cols: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _powers(b, r: int, field: FieldSpec) -> list[np.ndarray]:
    if isinstance(b, Monomial):
        return [b.power(e, field).to_dense() for e in range(r)]
    b = np.asarray(b, dtype=np.int64)
    return [mat_power(b, e, field) for e in range(r)]


def subblock_criterion(blocks: Sequence, r: int, field: FieldSpec) -> CriterionResult:
    """Check every t x t sub-block matrix of [B_j^i] (i < r) is invertible.

    Rows are power indices, columns are block indices; t runs up to
    min(r, len(blocks)).
    """
    pw = [_powers(b, r, field) for b in blocks]
    size = pw[0][0].shape[0]
    checked = 0
    for t in range(1, min(r, len(blocks)) + 1):
        for rows in itertools.combinations(range(r), t):
            for cols in itertools.combinations(range(len(blocks)), t):
                m = block([[pw[c][i] for c in cols] for i in rows], size)
                checked += 1
                if rank(m, field) < t * size:
                    return CriterionResult(False, checked, rows, cols)
    return CriterionResult(True, checked)


def criterion_blocks(code: ArrayCode) -> list:
    """Blocks whose sub-block criterion is equivalent to the code being MDS.

    Small blocks where the code defines them uniformly; otherwise the full
    modified permutation matrices (the criterion then is the erasure
    determinant condition itself).
    """
    if code.construction == 2:
        return list(code.small)
    if code.small_blocks is not None:
        return list(code.small_blocks)
    return list(code.P)


# -- coefficient search -----------------------------------------------------

@dataclass
class SearchResult:
    lambdas: tuple[int, ...]
    tries: int
    seed: int

    def to_dict(self) -> dict:
        return {"lambda": list(self.lambdas), "tries": self.tries, "seed": self.seed}


def _lambda_blocks(r: int, k: int, field: FieldSpec, lambdas) -> list[Monomial]:
    from .code_c2 import small_block_matrix
    return [small_block_matrix(j, r, k, field, lambdas[j - 1]) for j in range(1, k + 1)]


def sample_lambdas(r: int, k: int, field: FieldSpec, seed: int, index: int) -> tuple[int, ...]:
    rng = np.random.default_rng([seed, index])
    return tuple(int(x) for x in field.random(rng, k, nonzero=True))


def search_coefficients(r: int, k: int, field: FieldSpec, seed: int = 0, max_tries: int = 1000) -> SearchResult:
    """Sample nonzero lambda vectors until the small blocks pass the criterion."""
    if field.order <= 2:
        raise SearchFailure(f"{field} has a single nonzero element; use a larger field")
    for t in range(max_tries):
        lam = sample_lambdas(r, k, field, seed, t)
        if subblock_criterion(_lambda_blocks(r, k, field, lam), r, field).ok:
            return SearchResult(lam, t + 1, seed)
    raise SearchFailure(f"no valid coefficients in {max_tries} tries over {field}; try a larger field")


@dataclass
class EquivalenceResult:
    ok: bool
    trials: int
    mds_count: int
    counterexamples: list = dc_field(default_factory=list)


def lemma1_equivalence_check(r: int, k: int, field: FieldSpec, trials: int, seed: int = 0) -> EquivalenceResult:
    """Compare exhaustive MDS verification with the small-block criterion."""
    from .code_c1 import C1Code, C1Params
    mds_count = 0
    bad = []
    for t in range(trials):
        lam = sample_lambdas(r, k, field, seed, t)
        code = C1Code(C1Params(r, k, field, lam))
        mds = verify_mds(code, seed=seed)
        crit = subblock_criterion(code.small_blocks, r, field)
        mds_count += mds.ok
        if mds.ok != crit.ok:
            bad.append({"lambda": lam, "mds": mds.ok, "criterion": crit.ok,
                        "pattern": mds.pattern, "rows": crit.rows, "cols": crit.cols})
    return EquivalenceResult(not bad, trials, mds_count, bad)
