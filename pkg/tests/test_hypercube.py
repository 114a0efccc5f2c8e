import itertools

import pytest
from hypothesis import given, strategies as st

from zigzag.errors import ParamError, SizeCapError
from zigzag.hypercube import (
    apply_f, check_size, hyperplane, int_to_vec, small_perm, unit, vec_to_int, weight_classes,
)

PARAMS = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (2, 4), (5, 2), (4, 3)]


def brute_vectors(r, k):
    """All vectors of Z_r^k in the order of their integer value (digit 1 first)."""
    return list(itertools.product(range(r), repeat=k))


def test_examples():
    assert int_to_vec(5, 2, 3) == (1, 0, 1)
    assert int_to_vec(0, 3, 4) == (0, 0, 0, 0)
    assert unit(1, 2, 2) == 2
    assert [apply_f(x, 1, 1, 2, 2) for x in range(4)] == [2, 3, 0, 1]
    assert [apply_f(x, 2, 1, 2, 2) for x in range(4)] == [1, 0, 3, 2]
    assert apply_f(2, 2, 1, 2, 2) == 3


@pytest.mark.parametrize("r,k", PARAMS)
def test_vector_roundtrip(r, k):
    vecs = brute_vectors(r, k)
    for x, v in enumerate(vecs):
        assert int_to_vec(x, r, k) == v
        assert vec_to_int(v, r) == x


@pytest.mark.parametrize("r,k", PARAMS)
def test_f_is_order_r_bijection(r, k):
    p = r**k
    for j in range(1, k + 1):
        for l in range(r):
            assert sorted(apply_f(x, j, l, r, k) for x in range(p)) == list(range(p))
        assert all(apply_f(x, j, 0, r, k) == x for x in range(p))
        for x in range(p):
            y = x
            for _ in range(r):
                y = apply_f(y, j, 1, r, k)
            assert y == x


@pytest.mark.parametrize("r,k", PARAMS)
def test_f_matches_digitwise_definition(r, k):
    for x, v in enumerate(brute_vectors(r, k)):
        for j in range(1, k + 1):
            for l in range(r):
                w = list(v)
                w[j - 1] = (w[j - 1] + l) % r
                assert apply_f(x, j, l, r, k) == vec_to_int(w, r)


def test_weight_class_examples():
    t = weight_classes(2, 3)
    assert t[0] == (0, 3, 5, 6)
    assert t[1] == (1, 2, 4, 7)
    t = weight_classes(2, 2)
    assert t[0] == (0, 3) and t[1] == (1, 2)


@pytest.mark.parametrize("r,k", PARAMS)
def test_weight_classes_invariants(r, k):
    t = weight_classes(r, k)
    vecs = brute_vectors(r, k)
    all_rows = sorted(x for cls in t.classes for x in cls)
    assert all_rows == list(range(r**k))
    for i, cls in enumerate(t.classes):
        assert len(cls) == r ** (k - 1)
        assert all(sum(vecs[x]) % r == i for x in cls)
        for s, x in enumerate(cls):
            v = list(vecs[t[0][s]])
            v[-1] = (v[-1] + i) % r
            assert vec_to_int(v, r) == x
            assert t.locate(x) == (i, s)
    assert list(t[0]) == sorted(t[0])


@pytest.mark.parametrize("r,k", PARAMS)
def test_f_shifts_weight_classes(r, k):
    t = weight_classes(r, k)
    for j in range(1, k + 1):
        for i in range(r):
            assert {apply_f(x, j, 1, r, k) for x in t[i]} == set(t[(i + 1) % r])


def test_hyperplane_examples():
    assert hyperplane(1, 2, 3) == (0, 1, 2, 3)
    assert hyperplane(1, 2, 2) == (0, 1)
    assert hyperplane(3, 3, 3) == tuple(x for x in range(27) if x % 3 == 0)


@pytest.mark.parametrize("r,k", PARAMS)
def test_hyperplane_partition_and_closure(r, k):
    vecs = brute_vectors(r, k)
    for j in range(1, k + 1):
        y = set(hyperplane(j, r, k))
        assert len(y) == r ** (k - 1)
        assert y == {x for x, v in enumerate(vecs) if v[j - 1] == 0}
        translates = [{apply_f(x, j, t, r, k) for x in y} for t in range(r)]
        assert set().union(*translates) == set(range(r**k))
        assert sum(map(len, translates)) == r**k
        # closed under digitwise addition
        for a in y:
            for b in y:
                s = [(u + w) % r for u, w in zip(vecs[a], vecs[b])]
                assert vec_to_int(s, r) in y


@pytest.mark.parametrize("r,k", PARAMS)
def test_hyperplane_invariant_under_rebuild_shifts(r, k):
    # Y_j + i(e_k - e_j') + s e_k = Y_j for j' != j, j, j' < k
    vecs = brute_vectors(r, k)
    for j in range(1, k):
        y = set(hyperplane(j, r, k))
        for jp in range(1, k):
            if jp == j:
                continue
            for i in range(r):
                for s in range(r):
                    shifted = set()
                    for x in y:
                        v = list(vecs[x])
                        v[k - 1] = (v[k - 1] + i + s) % r
                        v[jp - 1] = (v[jp - 1] - i) % r
                        shifted.add(vec_to_int(v, r))
                    assert shifted == y


def test_small_perm_example():
    t = weight_classes(2, 3)
    sp = small_perm(1, 2, 3)
    assert [t[0][sp(s)] for s in range(4)] == [5, 6, 0, 3]
    assert small_perm(3, 2, 3).perm == (0, 1, 2, 3)


@pytest.mark.parametrize("r,k", PARAMS)
def test_small_perm_order_r(r, k):
    vecs = brute_vectors(r, k)
    t = weight_classes(r, k)
    for j in range(1, k + 1):
        sp = small_perm(j, r, k)
        assert sorted(sp.perm) == list(range(r ** (k - 1)))
        assert sp.power(r).perm == tuple(range(r ** (k - 1)))
        for s, x in enumerate(t[0]):
            v = list(vecs[x])
            v[j - 1] = (v[j - 1] + 1) % r
            v[k - 1] = (v[k - 1] - 1) % r
            assert t[0][sp(s)] == vec_to_int(v, r)


def test_errors(monkeypatch):
    with pytest.raises(ParamError):
        int_to_vec(8, 2, 3)
    with pytest.raises(ParamError):
        apply_f(0, 4, 1, 2, 3)
    with pytest.raises(ParamError):
        apply_f(0, 1, 2, 2, 3)
    with pytest.raises(ParamError):
        hyperplane(0, 2, 3)
    with pytest.raises(ParamError):
        small_perm(4, 2, 3)
    with pytest.raises(SizeCapError):
        check_size(2, 21)
    monkeypatch.setenv("ZZ_MAX_PK", "16")
    with pytest.raises(SizeCapError):
        check_size(2, 5)
    assert check_size(2, 4) == 16


@given(st.integers(2, 6), st.integers(1, 6), st.data())
def test_roundtrip_property(r, k, data):
    x = data.draw(st.integers(0, r**k - 1))
    assert vec_to_int(int_to_vec(x, r, k), r) == x
