import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffcpd.compress import Cpd, Tensor3, compress, lift, mode_ranks, mode_reduce, reconstruct
from ffcpd.instances import random_instance
from ffcpd.linalg import Matrix, is_invertible

from conftest import GF2, GF3, SMALL_FIELDS, fields, tensor, tensors


def naive_reconstruct(cpd, shape):
    f = cpd.field
    n0, n1, n2 = shape
    out = []
    for i in range(n0):
        for j in range(n1):
            for k in range(n2):
                acc = 0
                for r in range(cpd.r):
                    acc = f.add(acc, f.mul(f.mul(cpd.a[r, i], cpd.b[r, j]), cpd.c[r, k]))
                out.append(acc)
    return Tensor3(f, shape, tuple(out))


def test_tensor_validation():
    with pytest.raises(ValueError):
        Tensor3(GF2, (1, 1, 2), (1,))
    with pytest.raises(ValueError):
        Tensor3(GF2, (1, 1, 1), (2,))


def test_reconstruct_examples():
    assert reconstruct(Cpd.zeros(GF2, 0, (2, 2, 2))).is_zero()
    one = Cpd(GF2, Matrix(GF2, [[1, 0]]), Matrix(GF2, [[1, 1]]), Matrix(GF2, [[0, 1]]))
    t = reconstruct(one)
    ones = {(i, j, k) for i in range(2) for j in range(2) for k in range(2) if t[i, j, k]}
    assert ones == {(0, 0, 1), (0, 1, 1)}
    two = Cpd(GF2, *(Matrix(GF2, m.rows * 2, 2) for m in (one.a, one.b, one.c)))
    assert reconstruct(two).is_zero()


@given(st.sampled_from(list(SMALL_FIELDS.values())), st.integers(0, 3), st.integers(0, 10**6))
def test_reconstruct_matches_naive(f, r, seed):
    t, w = random_instance(f, (2, 3, 2), r, seed)
    assert t == naive_reconstruct(w, (2, 3, 2))


@given(tensors(max_side=3), st.integers(0, 2))
def test_flattening_roundtrip(t, mode):
    other = tuple(s for d, s in enumerate(t.shape) if d != mode)
    assert Tensor3.from_flattening(t.field, mode, t.flattening(mode), other) == t


def test_mode_reduce_examples():
    s = [[1, 0], [1, 1]]
    t = tensor(GF2, [s, s])
    red, g, gi, r = mode_reduce(t, 0, 2)
    assert r == 1 and red.shape == (1, 2, 2)
    red, g, gi, r = mode_reduce(Tensor3.zeros(GF3, (2, 3, 2)), 1, 5)
    assert r == 0 and red.shape == (2, 0, 2)
    t = tensor(GF2, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    assert mode_reduce(t, 0, 1) is None


def test_compress_examples():
    cpd = Cpd(GF3, Matrix(GF3, [[1, 2, 0]]), Matrix(GF3, [[0, 2]]), Matrix(GF3, [[1, 1, 1, 2]]))
    t = reconstruct(cpd)
    comp = compress(t, 1)
    assert comp.core.shape == (1, 1, 1) and comp.core.data[0] != 0
    assert compress(Tensor3.zeros(GF3, (3, 4, 5)), 0).core.shape == (0, 0, 0)
    t, _ = random_instance(GF2, (4, 4, 4), 2, seed=3)
    comp = compress(t, 2)
    assert comp is not None and comp.expand() == t


@given(tensors(max_side=4))
def test_compress_identity_and_full_slices(t):
    comp = compress(t, max(t.shape))
    assert comp.expand() == t
    assert comp.ranks == mode_ranks(t) == comp.core.shape
    for d in range(3):
        # core slices stay independent along every mode
        assert comp.core.flattening(d).rank() == comp.ranks[d]
        assert comp.gammas[d] @ comp.gamma_invs[d] == Matrix.identity(t.field, t.shape[d])
        assert is_invertible(comp.gammas[d])


@given(tensors(max_side=4), st.integers(0, 4))
def test_compress_cap_decision(t, cap):
    comp = compress(t, cap)
    assert (comp is None) == (max(mode_ranks(t)) > cap)


@given(fields, st.integers(0, 4), st.integers(0, 10**6))
def test_witness_rank_never_rejected(f, r, seed):
    t, _ = random_instance(f, (3, 4, 3), r, seed)
    assert compress(t, r) is not None


def test_lift_identity_compression():
    t = tensor(GF2, [[[1, 0], [0, 1]], [[0, 1], [1, 1]]])
    comp = compress(t, 2)
    assert all(g == Matrix.identity(GF2, 2) for g in comp.gammas)
    cpd = Cpd(GF2, Matrix(GF2, [[1, 0], [0, 1]]), Matrix(GF2, [[1, 1], [0, 1]]), Matrix(GF2, [[1, 0], [1, 1]]))
    assert lift(cpd, comp) == cpd


def test_lift_rank1():
    a, b, c = (1, 1, 0), (0, 1), (1, 0, 1)
    cpd = Cpd(GF2, Matrix(GF2, [a]), Matrix(GF2, [b]), Matrix(GF2, [c]))
    t = reconstruct(cpd)
    comp = compress(t, 1)
    core_cpd = Cpd(GF2, *(Matrix(GF2, [[1]]) for _ in range(3)))
    assert reconstruct(core_cpd) == comp.core
    assert reconstruct(lift(core_cpd, comp)) == t


@given(fields, st.integers(0, 3), st.integers(0, 10**6))
def test_lift_preserves_reconstruction(f, r, seed):
    # project a witness onto the core coordinates, lift back, compare
    t, w = random_instance(f, (3, 2, 3), r, seed)
    comp = compress(t, 3)
    facs = []
    for d, fac in enumerate((w.a, w.b, w.c)):
        g = comp.gammas[d].take_rows(comp.ranks[d])
        facs.append(fac @ g.T if fac.nrows else Matrix.zeros(f, 0, comp.ranks[d]))
    core_cpd = Cpd(f, *facs)
    assert reconstruct(core_cpd, comp.core.shape) == comp.core
    assert reconstruct(lift(core_cpd, comp), t.shape) == t
