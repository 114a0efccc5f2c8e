"""Acceptance criteria, one test each, with their runtime budgets."""

import itertools
import time

import numpy as np
import pytest

from zigzag import shard
from zigzag.cli import decode_directory, main, rebuild_directory
from zigzag.code_c1 import C1Code, C1Params
from zigzag.code_c2 import C2Code, C2Params
from zigzag.decoder import decode_erasures, lemma1_equivalence_check, search_coefficients, verify_mds
from zigzag.galois import GF3, GF4, GF256, FieldSpec

pytestmark = pytest.mark.usefixtures("criterion")

PARAM_SETS = [
    ("c1", 2, 2, GF3), ("c1", 2, 3, GF3), ("c1", 3, 2, GF4), ("c1", 3, 3, GF4),
    ("c2", 2, 3, GF3), ("c2", 3, 3, GF4),
]


def build(kind, r, k, field, **kw):
    if kind == "c1":
        return C1Code(C1Params(r, k, field, kw.get("lambdas")))
    return C2Code(C2Params(r, k, field, **kw))


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_ac1_r2_k2_relations():
    with Timer() as t:
        code = C1Code(C1Params(2, 2, GF3))
        rng = np.random.default_rng(2024)
        for _ in range(100):
            a = GF3.random(rng, (4, 2))
            par = code.encode(a)
            r, z = par[:, 0], par[:, 1]
            assert a[0, 0] == (2 * a[0, 1] + r[0]) % 3
            assert a[1, 0] == (2 * a[1, 1] + r[1]) % 3
            assert a[2, 0] == (2 * a[1, 1] + z[0]) % 3
            assert a[3, 0] == (a[0, 1] + z[1]) % 3
    assert t.elapsed < 1


def test_ac2_c2_ratio():
    with Timer() as t:
        code = C2Code(C2Params(2, 3, GF3, alpha=2))
        for node in range(1, 5):
            plan = code.rebuild(node)
            assert len(plan.reads) == 3
            assert all(len(rows) == 4 for rows in plan.reads.values())
            rep = plan.report()
            assert rep.ratio.numerator == 1 and rep.ratio.denominator == 2
        assert all(rows == (0, 1, 2, 3) for rows in code.rebuild(1).reads.values())
        assert all(rows == (0, 3, 5, 6) for rows in code.rebuild(3).reads.values())

        code = C2Code(C2Params(3, 3, GF4))
        for node in range(1, code.n + 1):
            rep = code.rebuild(node).report()
            assert rep.ratio.numerator == 1 and rep.ratio.denominator == 3
    assert t.elapsed < 10


def test_ac3_mds_exhaustive():
    with Timer() as t:
        for kind, r, k, field in PARAM_SETS:
            code = build(kind, r, k, field)
            res = verify_mds(code, seed=0)
            assert res.ok, (kind, r, k, res)
            assert res.checked == len(list(itertools.combinations(range(code.n), r)))
        assert verify_mds(build("c2", 2, 3, GF3)).checked == 6
        assert verify_mds(build("c2", 3, 3, GF4)).checked == 10
        bad = C2Code(C2Params(2, 3, GF3, alpha=1, strict=False), validate=False)
        res = verify_mds(bad)
        assert not res.ok and set(res.pattern) == {1, 2}
    assert t.elapsed < 30


def test_ac4_rebuild_matches_decoder():
    codes = [build(*ps) for ps in PARAM_SETS]
    codes.append(C1Code(C1Params(4, 3, GF256, (23, 198, 167))))
    codes.append(C2Code(C2Params(4, 3, GF256, lambdas=(23, 198, 167))))
    for code in codes:
        rng = np.random.default_rng(code.r * 100 + code.k)
        info = code.field.random(rng, (code.p, code.q, 20))
        word = code.codeword(info)
        for node in range(1, code.n + 1):
            plan = code.rebuild(node)
            via_plan = plan.execute({n: word[:, n - 1] for n in plan.reads}, code.field)
            surv = {n: word[:, n - 1] for n in range(1, code.n + 1) if n != node}
            decoded = decode_erasures(code, surv, (node,))
            via_decoder = code.codeword(decoded)[:, node - 1]
            assert np.array_equal(via_plan, via_decoder)


def test_ac5_criterion_matches_mds():
    with Timer() as t:
        gf16 = FieldSpec.gf2e(4)
        for r, k, trials in ((2, 2, 100), (3, 2, 50)):
            res = lemma1_equivalence_check(r, k, gf16, trials, seed=0)
            assert res.ok, res.counterexamples
            assert res.trials == trials
    assert t.elapsed < 60


def test_ac6_coefficient_search():
    with Timer() as t:
        res = search_coefficients(4, 3, GF256, seed=42)
        assert res.tries <= 100
        c1 = C1Code(C1Params(4, 3, GF256, res.lambdas))
        assert c1.p == 64
        out = verify_mds(c1, seed=42)
        # C1 at r=4, k=3 has 7 nodes, hence C(7,4) patterns
        assert out.ok and out.checked == 35
        for alpha in (2, 7, 255):
            c2 = C2Code(C2Params(4, 3, GF256, alpha=alpha, lambdas=res.lambdas))
            out = verify_mds(c2, seed=42)
            assert out.ok and out.checked == 15
    assert t.elapsed < 300


@pytest.mark.parametrize("field,r", [("gf3", 2), ("gf4", 3)])
def test_ac7_cli_round_trip(tmp_path, capsys, field, r):
    out = tmp_path / "shards"
    assert main(["encode", "--construction", "2", "--r", str(r), "--k", "3", "--field", field,
                 "--random-data", "10240", "--out-dir", str(out)]) == 0
    original = (out / "input.bin").read_bytes()
    assert len(original) == 10240
    code = C2Code(C2Params(r, 3, FieldSpec.parse(field)))
    for lost in range(1, code.n + 1):
        path = shard.shard_path(out, lost)
        before = path.read_bytes()
        path.unlink()
        rep = rebuild_directory(out, lost)
        assert path.read_bytes() == before
        plan_rep = code.rebuild(lost).report()
        stripes = rep["stripes"]
        for node, count in rep["per_node"].items():
            assert count == plan_rep.accessed[int(node)] * stripes
        assert rep["accessed"] == plan_rep.total * stripes
        assert rep["remaining"] == plan_rep.remaining * stripes
        assert (rep["ratio"]["num"], rep["ratio"]["den"]) == (1, r)
    saved = {n: shard.shard_path(out, n).read_bytes() for n in range(1, code.n + 1)}
    for subset in itertools.combinations(range(1, code.n + 1), r):
        for n in subset:
            shard.shard_path(out, n).unlink()
        assert decode_directory(out) == original
        for n in subset:
            shard.shard_path(out, n).write_bytes(saved[n])
    capsys.readouterr()
