import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kulshammer import linalg as L


def test_rref_identity_gf2():
    m, r = L.rref(np.eye(2, dtype=int), 2)
    assert m.tolist() == [[1, 0], [0, 1]]
    assert r == 2


def test_rref_duplicate_rows_gf2():
    m, r = L.rref([[1, 1], [1, 1]], 2)
    assert m.tolist() == [[1, 1], [0, 0]]
    assert r == 1


def test_rref_gf5_scaling():
    # hand row-reduction: [[2,4],[1,2]] ~ [[1,2],[0,0]] over GF(5)
    m, r = L.rref([[2, 4], [1, 2]], 5)
    assert m.tolist() == [[1, 2], [0, 0]]
    assert r == 1


def test_kernel_zero_matrix():
    k = L.kernel(np.zeros((3, 3), dtype=int), 5)
    assert k.dim == 3


def test_kernel_identity():
    assert L.kernel(np.eye(3, dtype=int), 3).dim == 0


def test_kernel_single_relation_gf2():
    # all four vectors of GF(2)^2: only (0,0) and (1,1) satisfy x+y=0
    k = L.kernel([[1, 1]], 2)
    members = [v for v in ([0, 0], [0, 1], [1, 0], [1, 1]) if k.contains(v)]
    assert members == [[0, 0], [1, 1]]
    assert k.dim == 1


def test_intersect_axes():
    e1 = L.Subspace.from_vectors([[1, 0]], 2, 2)
    e2 = L.Subspace.from_vectors([[0, 1]], 2, 2)
    assert e1.intersect(e2).dim == 0


def test_sum_spans_plane():
    # enumerate: span{e1} + span{e1+e2} covers all of GF(2)^2
    e1 = L.Subspace.from_vectors([[1, 0]], 2, 2)
    diag = L.Subspace.from_vectors([[1, 1]], 2, 2)
    total = e1.sum(diag)
    assert all(total.contains(v) for v in ([0, 0], [0, 1], [1, 0], [1, 1]))
    assert total == L.Subspace.full(2, 2)


def test_preimage_of_identity_is_target():
    v = L.Subspace.from_vectors([[1, 2, 0], [0, 0, 1]], 5, 3)
    assert L.preimage(np.eye(3, dtype=int), v, 5) == v


def test_quotient_basis_errors_on_noncontainment():
    big = L.Subspace.from_vectors([[1, 0]], 2, 2)
    small = L.Subspace.from_vectors([[0, 1]], 2, 2)
    with pytest.raises(L.ContainmentError):
        L.quotient_basis(big, small)


def test_dimension_mismatch_raises():
    a = L.Subspace.from_vectors([[1, 0]], 2, 2)
    b = L.Subspace.from_vectors([[1, 0, 0]], 2, 3)
    with pytest.raises(L.DimensionMismatchError):
        a.sum(b)


def test_fp_arithmetic():
    a = L.Fp(5, 3)
    b = L.Fp(5, 4)
    assert (a + b).value == 2
    assert (a * b).value == 2
    assert (a / b).value == (3 * pow(4, 3, 5)) % 5
    with pytest.raises(ValueError):
        L.Fp(6, 1)
    with pytest.raises(ZeroDivisionError):
        L.Fp(5, 0).inverse()


matrices = st.tuples(
    st.sampled_from([2, 3, 5]),
    st.integers(1, 5),
    st.integers(1, 5),
    st.integers(0, 2**30),
)


def _random_matrix(p, rows, cols, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, p, size=(rows, cols))


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_rank_nullity(params):
    p, rows, cols, seed = params
    m = _random_matrix(p, rows, cols, seed)
    assert L.rank(m, p) + L.kernel(m, p).dim == cols


@given(matrices, st.integers(0, 2**30))
@settings(max_examples=60, deadline=None)
def test_subspace_lattice_dims(params, seed2):
    p, rows, cols, seed = params
    a = L.row_space(_random_matrix(p, rows, cols, seed), p)
    b = L.row_space(_random_matrix(p, rows, cols, seed2), p)
    s = a.sum(b)
    i = a.intersect(b)
    assert s.dim + i.dim == a.dim + b.dim
    assert s == b.sum(a)  # canonical form: bit-exact commutativity
    for row in i.basis:
        assert a.contains(row) and b.contains(row)


@given(matrices)
@settings(max_examples=60, deadline=None)
def test_rref_idempotent(params):
    p, rows, cols, seed = params
    m = _random_matrix(p, rows, cols, seed)
    r1, rank1 = L.rref(m, p)
    r2, rank2 = L.rref(r1, p)
    assert rank1 == rank2
    assert np.array_equal(r1, r2)


@given(matrices)
@settings(max_examples=40, deadline=None)
def test_image_kernel_compose_to_zero(params):
    p, rows, cols, seed = params
    m = _random_matrix(p, rows, cols, seed)
    k = L.kernel(m, p)
    for v in k.basis:
        assert not ((m @ v) % p).any()
    img = L.image(m, p)
    assert img.dim == L.rank(m, p)
