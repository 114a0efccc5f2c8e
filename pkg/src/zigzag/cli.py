"""Command-line interface.

Exit codes: 0 success, 1 usage or I/O error, 2 verification failure,
3 unrecoverable erasures.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import shard
from .decoder import decode_erasures, search_coefficients, verify_mds
from .errors import NotMDSError, SearchFailure, ShardError, ZigzagError
from .factory import default_field, make_code
from .galois import FieldSpec

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_UNRECOVERABLE = 0, 1, 2, 3


class Unrecoverable(ZigzagError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _lambda_list(text: str) -> tuple[int, ...]:
    return tuple(int(x, 0) for x in text.replace(" ", "").split(",") if x)


def _code_args(p: argparse.ArgumentParser, with_construction: bool = True) -> None:
    if with_construction:
        p.add_argument("--construction", type=int, choices=(1, 2), default=2)
    p.add_argument("--r", type=int, required=True, help="number of parity nodes")
    p.add_argument("--k", type=int, required=True, help="row count is r^k")
    p.add_argument("--field", type=FieldSpec.parse, default=None,
                   help="gf3, gf4, gf2e8, gfp:<p> or gf2e<m>:<poly-hex>")


def _coeff_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=lambda s: int(s, 0), default=None)
    p.add_argument("--lambda", dest="lambdas", type=_lambda_list, default=None,
                   help="comma-separated nonzero coefficients")
    p.add_argument("--seed", type=int, default=None, help="search lambda coefficients with this seed")
    p.add_argument("--max-tries", type=int, default=1000)


def _code_from_args(args, strict: bool = True):
    return make_code(args.construction, args.r, args.k, args.field or default_field(args.r),
                     args.alpha, args.lambdas, args.seed, args.max_tries, strict=strict)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _fraction(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


# -- commands ---------------------------------------------------------------

def cmd_encode(args) -> int:
    code = _code_from_args(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.random_data is not None:
        rng = np.random.default_rng(args.seed or 0)
        data = rng.integers(0, code.field.order, size=args.random_data, dtype=np.int64).astype(np.uint8).tobytes()
        (out / "input.bin").write_bytes(data)
    elif args.input:
        data = Path(args.input).read_bytes()
    else:
        raise ZigzagError("encode needs --input or --random-data")
    info = shard.stripe_data(data, code)
    word = code.codeword(info)
    for node in range(1, code.n + 1):
        shard.write_shard(out, code, node, word[:, node - 1])
    shard.write_manifest(out, code, len(data), info.shape[2])
    print(f"wrote {code.n} shards x {info.shape[2]} stripes to {out}", file=sys.stderr)
    return EXIT_OK


def _code_from_shards(directory: Path, readers):
    h = next(iter(readers.values())).header
    manifest = shard.read_manifest(directory) or {}
    lambdas = manifest.get("lambda")
    return make_code(h.construction, h.r, h.k, h.field, h.alpha or None,
                     None if lambdas is None else tuple(lambdas), strict=False)


def rebuild_directory(directory: Path, lost: int, verify: bool = True) -> dict:
    readers = shard.scan(directory)
    readers.pop(lost, None)
    code = _code_from_shards(directory, readers)
    code.check_node(lost)
    missing = [n for n in range(1, code.n + 1) if n != lost and n not in readers]
    if missing:
        raise Unrecoverable(f"nodes {missing} are also missing; single-node rebuild impossible, use decode")
    if verify:
        bad = [n for n, rd in readers.items() if not rd.verify()]
        if bad:
            raise ShardError(f"CRC mismatch on nodes {bad}; use decode to recover around them")
    stripes = next(iter(readers.values())).header.stripes
    plan = code.rebuild(lost)
    columns = {node: readers[node].read_rows(rows) for node, rows in plan.reads.items()}
    restored = plan.execute(columns, code.field)
    shard.write_shard(directory, code, lost, restored)

    measured = {n: readers[n].accessed for n in sorted(readers)}
    expected = {n: plan.accessed(n) * stripes for n in sorted(readers)}
    if measured != expected:
        raise AssertionError(f"measured access {measured} differs from plan {expected}")
    remaining = (code.n - 1) * code.p * stripes
    ratio = Fraction(sum(measured.values()), remaining)
    return {
        "node": lost,
        "stripes": stripes,
        "rows": {str(n): list(rows) for n, rows in plan.reads.items()},
        "per_node": {str(n): c for n, c in measured.items()},
        "accessed": sum(measured.values()),
        "remaining": remaining,
        "ratio": _fraction(ratio),
        "ratio_float": float(ratio),
    }


def cmd_rebuild(args) -> int:
    report = rebuild_directory(Path(args.shards), args.lost, verify=not args.no_verify)
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    _emit(report)
    return EXIT_OK


def decode_directory(directory: Path) -> bytes:
    readers = shard.scan(directory)
    for node in sorted(readers):
        if not readers[node].verify():
            print(f"node {node}: CRC mismatch, treating as erased", file=sys.stderr)
            del readers[node]
    if not readers:
        raise Unrecoverable("no intact shards")
    code = _code_from_shards(directory, readers)
    missing = [n for n in range(1, code.n + 1) if n not in readers]
    if len(missing) > code.r:
        raise Unrecoverable(f"only {len(readers)} intact shards, need {code.q} ({len(missing) - code.r} short)")
    columns = {n: rd.read_all() for n, rd in readers.items()}
    if all(j in columns for j in range(1, code.q + 1)):
        info = np.stack([columns[j] for j in range(1, code.q + 1)], axis=1)
    else:
        try:
            info = decode_erasures(code, columns, missing)
        except NotMDSError as exc:
            raise Unrecoverable(str(exc)) from exc
    return shard.unstripe(info, code)


def cmd_decode(args) -> int:
    data = decode_directory(Path(args.shards))
    Path(args.out).write_bytes(data)
    print(f"recovered {len(data)} bytes", file=sys.stderr)
    return EXIT_OK


def ratio_report(code) -> dict:
    nodes = []
    total = 0
    remaining = 0
    for node in range(1, code.n + 1):
        plan = code.rebuild(node)
        rep = plan.report()
        total += rep.total
        remaining = rep.remaining
        nodes.append(rep.to_dict() | {"rows": {str(n): list(r) for n, r in plan.reads.items()}})
    avg = Fraction(total, code.n * remaining)
    return code.describe() | {"nodes": nodes, "average": _fraction(avg), "average_float": float(avg)}


def cmd_ratio(args) -> int:
    _emit(ratio_report(_code_from_args(args)))
    return EXIT_OK


def cmd_verify_mds(args) -> int:
    code = _code_from_args(args, strict=False)
    res = verify_mds(code, seed=args.probe_seed)
    _emit(code.describe() | {
        "result": "pass" if res.ok else "fail",
        "patterns_checked": res.checked,
        "pattern": list(res.pattern) if res.pattern else None,
        "reason": res.reason or None,
    })
    return EXIT_OK if res.ok else EXIT_VERIFY


def cmd_search_coeffs(args) -> int:
    field = args.field or FieldSpec.gf2e(8)
    try:
        res = search_coefficients(args.r, args.k, field, args.seed, args.max_tries)
    except SearchFailure as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    _emit(res.to_dict() | {"r": args.r, "k": args.k, "field": str(field),
                           "flag": "--lambda " + ",".join(map(str, res.lambdas))})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zigzag", description="MDS array codes with optimal rebuilding access")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="stripe a file into node shards")
    _code_args(p)
    _coeff_args(p)
    p.add_argument("--input")
    p.add_argument("--random-data", type=int, default=None, metavar="N",
                   help="encode N random symbols (saved as input.bin in the output directory)")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover the original file from surviving shards")
    p.add_argument("--shards", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("rebuild", help="restore one lost shard with minimal access")
    p.add_argument("--shards", required=True)
    p.add_argument("--lost", type=int, required=True)
    p.add_argument("--report")
    p.add_argument("--no-verify", action="store_true", help="skip the CRC pass over surviving shards")
    p.set_defaults(func=cmd_rebuild)

    p = sub.add_parser("ratio", help="rebuilding ratio of every node as JSON")
    _code_args(p)
    _coeff_args(p)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("verify-mds", help="check every r-erasure pattern is decodable")
    _code_args(p)
    _coeff_args(p)
    p.add_argument("--probe-seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_mds)

    p = sub.add_parser("search-coeffs", help="random search for lambda coefficients")
    _code_args(p, with_construction=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-tries", type=int, default=1000)
    p.set_defaults(func=cmd_search_coeffs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Unrecoverable as exc:
        print(f"unrecoverable: {exc}", file=sys.stderr)
        return EXIT_UNRECOVERABLE
    except (ZigzagError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
