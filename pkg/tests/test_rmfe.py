import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grcdmm import errors
from grcdmm.rmfe import INFINITY, build_rmfe, concatenate, phi, phi_matrix, psi, psi_matrix
from grcdmm.ring import RingElement, all_elements, make_extension, make_ring, tower

from conftest import oracle_of, to_oracle
from oracles import lagrange, poly_eval

Z4 = make_ring(2, 2, 1)
W64 = make_ring(2, 64, 1)


def ext_el(scheme, *coeffs):
    return RingElement(scheme.ext, np.array(coeffs).reshape(scheme.ext.elem_shape))


def ints(elems):
    return [int(x.coeffs[0]) for x in elems]


def all_vectors(ring, n):
    """Every vector of ring^n as an array of shape (n, K, *elem)."""
    elems = all_elements(ring)
    vecs = np.stack([np.stack(v) for v in itertools.product(elems, repeat=n)])
    return np.moveaxis(vecs, 1, 0)


def test_build_examples():
    assert ints(build_rmfe(Z4, 2, 3).points) == [0, 1]
    pts = build_rmfe(Z4, 3, 5, use_infinity=True).points
    assert ints(pts[:2]) == [0, 1] and pts[2] is INFINITY
    with pytest.raises(errors.WidthTooLarge):
        build_rmfe(Z4, 3, 5)
    with pytest.raises(errors.DegreeTooSmall):
        build_rmfe(Z4, 2, 2)
    with pytest.raises(errors.WidthTooLarge):
        build_rmfe(Z4, 4, 7, use_infinity=True)


def test_phi_examples():
    s = build_rmfe(Z4, 2, 3)
    assert phi(s, [1, 1]) == ext_el(s, 1, 0, 0)
    assert phi(s, [1, 0]) == ext_el(s, 1, 3, 0)
    assert phi(s, [0, 1]) == ext_el(s, 0, 1, 0)
    with pytest.raises(errors.LengthMismatch):
        phi(s, [1, 0, 1])


def test_psi_examples():
    s = build_rmfe(Z4, 2, 3)
    assert ints(psi(s, ext_el(s, 1, 0, 0))) == [1, 1]
    assert ints(psi(s, ext_el(s, 0, 1, 3))) == [0, 0]
    assert ints(psi(s, ext_el(s, 0, 0, 1))) == [0, 1]
    with pytest.raises(errors.ParamsMismatch):
        psi(s, RingElement(Z4, [1]))


def test_phi_is_lagrange_interpolation():
    base = make_ring(3, 2, 2)
    s = build_rmfe(base, 4, 8)
    oracle = oracle_of(base)
    x = base.random((4,), np.random.default_rng(0))
    want = lagrange(oracle, [to_oracle(base, a) for a in s.finite_points], [to_oracle(base, v) for v in x])
    got = s.ext.coeffs_first(s.phi(x))
    assert [to_oracle(base, c) for c in got[:4]] == want
    assert not np.any(got[4:])


def test_psi_is_evaluation():
    base = make_ring(3, 2, 2)
    s = build_rmfe(base, 4, 8)
    oracle = oracle_of(base)
    u = s.ext.random((), np.random.default_rng(1))
    coeffs = [to_oracle(base, c) for c in s.ext.coeffs_first(u)]
    got = s.psi(u)
    for a, v in zip(s.finite_points, got):
        assert to_oracle(base, v) == poly_eval(oracle, coeffs, to_oracle(base, a))


@pytest.mark.parametrize("n,m,inf", [(2, 3, False), (3, 5, True), (2, 4, False), (1, 1, False), (1, 1, True)])
def test_rmfe_identity_exhaustive_z4(n, m, inf):
    s = build_rmfe(Z4, n, m, inf)
    xs = all_vectors(Z4, n)
    X, Y = xs[:, :, None], xs[:, None, :]
    got = s.psi(s.ext.mul(s.phi(X), s.phi(Y)))
    assert np.array_equal(got, Z4.mul(np.broadcast_to(X, got.shape), Y))


@pytest.mark.parametrize("n,m,inf", [(2, 3, False), (2, 4, False), (3, 5, True)])
def test_rmfe_identity_random_word_ring(n, m, inf):
    s = build_rmfe(W64, n, m, inf)
    rng = np.random.default_rng(n * 10 + m)
    x, y = W64.random((n, 10_000), rng), W64.random((n, 10_000), rng)
    assert np.array_equal(s.psi(s.ext.mul(s.phi(x), s.phi(y))), W64.mul(x, y))


def test_rmfe_identity_over_larger_residue_field():
    base = make_ring(2, 16, 3)  # 8 finite points plus infinity
    s = build_rmfe(base, 9, 17, use_infinity=True)
    rng = np.random.default_rng(2)
    x, y = base.random((9, 200), rng), base.random((9, 200), rng)
    assert np.array_equal(s.psi(s.ext.mul(s.phi(x), s.phi(y))), base.mul(x, y))


def test_retraction_exhaustive_without_infinity():
    s = build_rmfe(Z4, 2, 3)
    xs = all_vectors(Z4, 2)
    assert np.array_equal(s.psi(s.phi(xs)), xs)


SCHEMES = [build_rmfe(Z4, 2, 3), build_rmfe(Z4, 3, 5, True), build_rmfe(W64, 2, 4),
           build_rmfe(make_ring(3, 3, 1), 4, 7, True)]


@given(st.sampled_from(SCHEMES), st.integers(0, 2**32))
def test_linearity(s, seed):
    rng = np.random.default_rng(seed)
    base = s.base
    x, y = base.random((s.n,), rng), base.random((s.n,), rng)
    c = base.random((), rng)
    assert np.array_equal(s.phi(base.add(x, y)), s.ext.add(s.phi(x), s.phi(y)))
    assert np.array_equal(s.phi(base.mul(c, x)), s.ext.mul(s.ext.embed_array(c), s.phi(x)))
    u, v = s.ext.random((), rng), s.ext.random((), rng)
    assert np.array_equal(s.psi(s.ext.add(u, v)), base.add(s.psi(u), s.psi(v)))
    assert np.array_equal(s.psi(s.ext.mul(s.ext.embed_array(c), u)), base.mul(c, s.psi(u)))


@given(st.sampled_from(SCHEMES), st.integers(0, 2**32))
def test_psi_sum_equals_sum_of_slots(s, seed):
    u = s.ext.random((3, 2), np.random.default_rng(seed))
    parts = s.psi(u)
    total = parts[0]
    for part in parts[1:]:
        total = s.base.add(total, part)
    assert np.array_equal(s.psi_sum(u), total)


def test_concatenation_example():
    inner = build_rmfe(Z4, 2, 3)
    outer = build_rmfe(inner.ext, 2, 3)
    c = concatenate(outer, inner)
    assert (c.n, c.m) == (4, 9)
    assert c.ext.total_degree == 9
    rng = np.random.default_rng(4)
    x, y = Z4.random((4, 500), rng), Z4.random((4, 500), rng)
    assert np.array_equal(c.psi(c.ext.mul(c.phi(x), c.phi(y))), Z4.mul(x, y))


def test_concatenation_matches_composed_maps():
    inner = build_rmfe(Z4, 2, 3)
    outer = build_rmfe(inner.ext, 2, 3)
    c = concatenate(outer, inner)
    x = Z4.random((4,), np.random.default_rng(0))
    by_hand = outer.phi(np.stack([inner.phi(x[0:2]), inner.phi(x[2:4])]))
    assert np.array_equal(c.phi(x), by_hand)
    u = c.ext.random((), np.random.default_rng(1))
    halves = outer.psi(u)
    assert np.array_equal(c.psi(u), np.concatenate([inner.psi(halves[0]), inner.psi(halves[1])]))


def test_concatenation_with_identity_inner():
    inner = build_rmfe(W64, 1, 1)
    outer = build_rmfe(inner.ext, 2, 3)
    c = concatenate(outer, inner)
    assert (c.n, c.m) == (2, 3)
    rng = np.random.default_rng(5)
    x, y = W64.random((2, 100), rng), W64.random((2, 100), rng)
    assert np.array_equal(c.psi(c.ext.mul(c.phi(x), c.phi(y))), W64.mul(x, y))


def test_concatenation_tower_mismatch():
    inner = build_rmfe(Z4, 2, 3)
    with pytest.raises(errors.TowerMismatch):
        concatenate(build_rmfe(Z4, 2, 3), inner)
    with pytest.raises(errors.TowerMismatch):
        concatenate(build_rmfe(make_extension(Z4, 4), 2, 3), inner)


def test_matrix_packing_examples():
    s = build_rmfe(Z4, 2, 3)
    packed = phi_matrix(s, [Z4.asarray([[[1]]]), Z4.asarray([[[0]]])])
    assert np.array_equal(packed[0, 0], phi(s, [1, 0]).coeffs)
    assert not np.any(phi_matrix(s, [Z4.zeros((2, 3)), Z4.zeros((2, 3))]))
    batch = Z4.random((2, 3, 4), np.random.default_rng(0))
    assert np.array_equal(psi_matrix(s, phi_matrix(s, batch)), batch)
    with pytest.raises(errors.ShapeMismatch):
        phi_matrix(s, [Z4.zeros((2, 3)), Z4.zeros((3, 2))])
    with pytest.raises(errors.LengthMismatch):
        phi_matrix(s, [Z4.zeros((2, 3))])


def test_packed_products_unpack_to_products():
    s = build_rmfe(W64, 2, 4)
    rng = np.random.default_rng(9)
    As, Bs = W64.random((2, 5, 6), rng), W64.random((2, 6, 3), rng)
    C = s.ext.matmul(s.phi_matrix(As), s.phi_matrix(Bs))
    out = s.psi_matrix(C)
    for k in range(2):
        assert np.array_equal(out[k], W64.matmul(As[k], Bs[k]))


def test_scheme_over_tower_base():
    base = tower(Z4, 3)
    s = build_rmfe(base, 4, 7)
    rng = np.random.default_rng(6)
    x, y = base.random((4, 30), rng), base.random((4, 30), rng)
    assert np.array_equal(s.psi(s.ext.mul(s.phi(x), s.phi(y))), base.mul(x, y))
