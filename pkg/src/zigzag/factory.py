"""Build a code object from loose parameters (CLI flags, shard headers)."""

from __future__ import annotations

from .arraycode import ArrayCode
from .code_c1 import C1Code, C1Params, explicit_field
from .code_c2 import C2Code, C2Params
from .decoder import search_coefficients
from .errors import ParamError
from .galois import FieldSpec


def default_field(r: int) -> FieldSpec:
    try:
        return explicit_field(r)
    except ParamError:
        return FieldSpec.gf2e(8)


def explicit_rule_applies(r: int, field: FieldSpec) -> bool:
    try:
        return explicit_field(r) == field
    except ParamError:
        return False


def make_code(construction: int, r: int, k: int, field: FieldSpec | None = None,
              alpha: int | None = None, lambdas=None, seed: int | None = None,
              max_tries: int = 1000, strict: bool = True) -> ArrayCode:
    """Explicit coefficients when the field allows, else lambda (given or searched)."""
    field = field or default_field(r)
    if lambdas is None and not explicit_rule_applies(r, field):
        if seed is None:
            raise ParamError(
                f"r={r} over {field} needs lambda coefficients: pass --lambda or --seed to search")
        lambdas = search_coefficients(r, k, field, seed, max_tries).lambdas
    if construction == 1:
        if alpha:
            raise ParamError("construction 1 takes no alpha")
        return C1Code(C1Params(r, k, field, None if lambdas is None else tuple(lambdas)))
    if construction == 2:
        return C2Code(C2Params(r, k, field, alpha, None if lambdas is None else tuple(lambdas), strict=strict))
    raise ParamError(f"unknown construction {construction}")
