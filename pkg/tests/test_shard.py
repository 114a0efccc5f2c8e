import struct
import zlib

import numpy as np
import pytest

from zigzag import shard
from zigzag.code_c1 import C1Code, C1Params
from zigzag.code_c2 import C2Code, C2Params
from zigzag.errors import FieldError, ShardError
from zigzag.galois import GF3, GF4, GF16, GF256


def test_header_layout():
    assert shard.HEADER.size == 29
    h = shard.ShardHeader(2, 3, 4, 2, 2, 0x7, 2, 5, 27, 1000, 0xDEADBEEF)
    raw = h.pack()
    assert len(raw) == 29 and raw[:4] == b"ZG01"
    assert struct.unpack_from("<B", raw, 4)[0] == 1
    assert shard.ShardHeader.unpack(raw) == h
    assert h.field == GF4
    with pytest.raises(ShardError):
        shard.ShardHeader.unpack(b"XX01" + raw[4:])
    with pytest.raises(ShardError):
        shard.ShardHeader.unpack(raw[:20])


def test_preamble_lengths():
    assert shard.preamble_length(256) == 8
    assert shard.preamble_length(3) == 41
    assert shard.preamble_length(4) == 32
    digits = shard.length_symbols(123456, 3)
    assert sum(d * 3**i for i, d in enumerate(digits)) == 123456


@pytest.mark.parametrize("code", [C2Code(C2Params(2, 3, GF3)), C1Code(C1Params(3, 2, GF4)),
                                  C2Code(C2Params(4, 3, GF256, lambdas=(23, 198)))],
                         ids=["c2-gf3", "c1-gf4", "c2-gf256"])
def test_stripe_roundtrip(code):
    rng = np.random.default_rng(0)
    pq = code.p * code.q
    for length in (0, 1, pq - 1, pq, 10 * pq + 7):
        data = rng.integers(0, code.field.order, size=length).astype(np.uint8).tobytes()
        info = shard.stripe_data(data, code)
        assert info.shape[:2] == (code.p, code.q)
        assert shard.unstripe(info, code) == data


def test_stripe_rejects_foreign_bytes():
    code = C2Code(C2Params(2, 3, GF3))
    with pytest.raises(FieldError, match="offset 2"):
        shard.stripe_data(bytes([0, 2, 3]), code)
    with pytest.raises(FieldError):
        shard.check_file_field(GF16.__class__.gf2e(9))


def test_write_read_and_crc(tmp_path):
    code = C2Code(C2Params(2, 3, GF3))
    rng = np.random.default_rng(1)
    info = GF3.random(rng, (8, 2, 5))
    word = code.codeword(info)
    for node in range(1, 5):
        shard.write_shard(tmp_path, code, node, word[:, node - 1])
    readers = shard.scan(tmp_path)
    assert sorted(readers) == [1, 2, 3, 4]
    rd = readers[3]
    assert rd.verify()
    assert np.array_equal(rd.read_all(), word[:, 2])
    assert rd.header.crc == zlib.crc32(word[:, 2].T.astype(np.uint8).tobytes())

    fresh = shard.ShardReader(shard.shard_path(tmp_path, 1))
    part = fresh.read_rows([0, 1, 3])
    assert fresh.accessed == 3 * 5
    assert np.array_equal(part[[0, 1, 3]], word[[0, 1, 3], 0])
    assert not part[[2, 4, 5, 6, 7]].any()
    fresh.read_rows([1])
    assert fresh.accessed == 15  # rereads are not new symbols

    path = shard.shard_path(tmp_path, 2)
    raw = bytearray(path.read_bytes())
    raw[40] ^= 1
    path.write_bytes(bytes(raw))
    assert not shard.ShardReader(path).verify()


def test_scan_errors(tmp_path):
    with pytest.raises(ShardError):
        shard.scan(tmp_path)
    a = C2Code(C2Params(2, 3, GF3))
    b = C2Code(C2Params(2, 4, GF3))
    shard.write_shard(tmp_path, a, 1, np.zeros((8, 1), dtype=np.int64))
    shard.write_shard(tmp_path, b, 2, np.zeros((16, 1), dtype=np.int64))
    with pytest.raises(ShardError, match="disagrees"):
        shard.scan(tmp_path)
    path = shard.shard_path(tmp_path, 2)
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(ShardError, match="payload"):
        shard.ShardReader(path)


def test_runs():
    assert shard._runs([0, 1, 2, 5, 7, 8]) == [(0, 3), (5, 1), (7, 2)]
    assert shard._runs([]) == []
