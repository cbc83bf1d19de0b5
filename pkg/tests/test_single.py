import numpy as np
import pytest

from grcdmm import batch as batch_module
from grcdmm import errors
from grcdmm.cluster import Cluster
from grcdmm.metrics import Metrics
from grcdmm.ring import make_ring
from grcdmm.single import (
    SingleConfig,
    cost_profile,
    default_degree,
    default_width,
    multiply,
    plain_ep,
    single_multiply_I,
    single_multiply_II,
)

from oracles import ep_wire_counts, int_matmul

Z4 = make_ring(2, 2, 1)
Z256 = make_ring(2, 8, 1)
W64 = make_ring(2, 64, 1)


def schoolbook(base, A, B):
    return np.array(int_matmul(A[..., 0], B[..., 0], base.char), dtype=object)


def base_matrix(ring, rows):
    return ring.asarray(np.array(rows, dtype=object)[..., None])


def eye(ring, k):
    return ring.asarray(np.eye(k, dtype=int)[..., None])


def test_default_degree_and_width():
    assert default_degree(2, 1, 8) == 3
    assert default_degree(2, 1, 16) == 4
    assert default_degree(2, 3, 8) == 1
    assert default_degree(3, 1, 10) == 3
    assert default_width(Z4, 3) == 2
    assert default_width(Z4, 5) == 3  # two finite points plus infinity
    assert default_width(Z4, 9) == 3


def test_config_degrees():
    assert SingleConfig("plain", Z4, 8).degrees == (3,)
    assert SingleConfig("rmfe_i", Z4, 8, n=2).degrees == (3,)
    assert SingleConfig("rmfe_i", Z4, 16, n=2).degrees == (4,)
    assert SingleConfig("rmfe_ii", Z4, 8, n=2, levels=2).degrees == (3, 3)
    assert SingleConfig("rmfe_ii", Z4, 8, n=2, levels=2, m=9).degrees == (3, 3)
    assert SingleConfig("rmfe_ii", Z4, 8, n=2, levels=2, m=12, m_inner=3).degrees == (3, 4)
    with pytest.raises(ValueError):
        SingleConfig("rmfe_ii", Z4, 8, n=2, levels=2, m=12).degrees
    with pytest.raises(ValueError):
        SingleConfig("gcsa", Z4, 8)


# -- plain ------------------------------------------------------------------------


def test_plain_examples():
    config = SingleConfig("plain", Z4, 8, 2, 2, 1, m=3)
    B = Z4.random((4, 4), np.random.default_rng(0))
    assert np.array_equal(plain_ep(eye(Z4, 4), B, config), B)
    one = SingleConfig("plain", Z4, 1, m=1)
    assert plain_ep(base_matrix(Z4, [[3]]), base_matrix(Z4, [[3]]), one)[0, 0, 0] == 1
    rng = np.random.default_rng(1)
    A, B = Z4.random((4, 4), rng), Z4.random((4, 4), rng)
    assert np.array_equal(plain_ep(A, B, config)[..., 0].astype(object), schoolbook(Z4, A, B))


def test_plain_non_base_result_detected(monkeypatch):
    config = SingleConfig("plain", Z4, 8, 2, 2, 1, m=3)
    real = batch_module.decode

    def corrupt(*args, **kwargs):
        C = real(*args, **kwargs).copy()
        C[0, 0, 1] = 1  # a stray eta coefficient
        return C

    monkeypatch.setattr(batch_module, "decode", corrupt)
    with pytest.raises(errors.NonBaseResult):
        plain_ep(Z4.zeros((4, 4)), Z4.zeros((4, 4)), config)


# -- EP-RMFE-I ----------------------------------------------------------------------


def test_rmfe_i_examples():
    config = SingleConfig("rmfe_i", Z4, 8, 2, 2, 1, n=2)
    B = Z4.random((4, 4), np.random.default_rng(2))
    assert np.array_equal(single_multiply_I(eye(Z4, 4), B, config), B)
    inner = SingleConfig("rmfe_i", Z4, 1, n=2)
    a, b = base_matrix(Z4, [[3, 2]]), base_matrix(Z4, [[3], [3]])
    assert single_multiply_I(a, b, inner)[0, 0, 0] == (9 + 6) % 4
    rng = np.random.default_rng(3)
    A, B = Z4.random((4, 4), rng), Z4.random((4, 4), rng)
    assert np.array_equal(single_multiply_I(A, B, config)[..., 0].astype(object), schoolbook(Z4, A, B))


def test_packed_sum_is_bit_identical():
    rng = np.random.default_rng(4)
    for base in (Z4, W64):
        A, B = base.random((4, 6), rng), base.random((6, 4), rng)
        for n in (2, 3):
            plain_sum = SingleConfig("rmfe_i", base, 8, 2, 2, 1, n=n, m=5)
            packed = SingleConfig("rmfe_i", base, 8, 2, 2, 1, n=n, m=5, packed_sum=True)
            assert np.array_equal(single_multiply_I(A, B, plain_sum), single_multiply_I(A, B, packed))


# -- EP-RMFE-II ---------------------------------------------------------------------


@pytest.mark.parametrize("levels", [1, 2])
def test_rmfe_ii_examples(levels):
    config = SingleConfig("rmfe_ii", Z4, 8, 2, 2, 1, n=2, levels=levels)
    B = Z4.random((4, 4), np.random.default_rng(5))
    assert np.array_equal(single_multiply_II(eye(Z4, 4), B, config), B)
    rng = np.random.default_rng(6)
    A, B = Z4.random((4, 4), rng), Z4.random((4, 4), rng)
    assert np.array_equal(single_multiply_II(A, B, config)[..., 0].astype(object), schoolbook(Z4, A, B))


def test_rmfe_ii_two_levels_composite_degree():
    config = SingleConfig("rmfe_ii", Z4, 8, 2, 2, 1, n=2, levels=2, m=9)
    assert config.m_total == 9 and config.outer_rmfe.base == config.rmfe.ext
    rng = np.random.default_rng(7)
    A, B = Z4.random((4, 4), rng), Z4.random((4, 4), rng)
    assert np.array_equal(single_multiply_II(A, B, config)[..., 0].astype(object), schoolbook(Z4, A, B))


def test_rmfe_ii_width_one_equals_plain():
    rng = np.random.default_rng(8)
    A, B = W64.random((4, 4), rng), W64.random((4, 4), rng)
    want = plain_ep(A, B, SingleConfig("plain", W64, 8, 2, 2, 1))
    for levels in (1, 2):
        config = SingleConfig("rmfe_ii", W64, 8, 2, 2, 1, n=1, levels=levels, m=3 if levels == 1 else None)
        assert np.array_equal(single_multiply_II(A, B, config), want)


# -- correctness sweep ----------------------------------------------------------------

SWEEP = [
    ("plain", Z4, dict(N=8, u=2, v=2, w=1)),
    ("plain", W64, dict(N=9, u=2, v=2, w=2)),
    ("rmfe_i", Z256, dict(N=8, u=2, v=2, w=1, n=2)),
    ("rmfe_i", W64, dict(N=4, u=1, v=1, w=2, n=3)),
    ("rmfe_ii", Z4, dict(N=8, u=2, v=2, w=1, n=2)),
    ("rmfe_ii", W64, dict(N=9, u=2, v=2, w=2, n=2, levels=2)),
]


@pytest.mark.parametrize("scheme,base,kw", SWEEP, ids=lambda x: repr(x) if not isinstance(x, dict) else "")
def test_hundred_instances(scheme, base, kw):
    config = SingleConfig(scheme, base, **kw)
    mt, mr, ms = config.block_multiples()
    rng = np.random.default_rng(len(kw) + base.e)
    for k in range(100):
        t, r, s = (mt * int(rng.integers(1, 3)), mr * int(rng.integers(1, 3)), ms * int(rng.integers(1, 3)))
        A, B = base.random((t, r), rng), base.random((r, s), rng)
        cluster = Cluster(config.N, jitter=1.0, seed=k)
        got = multiply(A, B, config, cluster)
        assert np.array_equal(got[..., 0].astype(object), schoolbook(base, A, B))


# -- cost accounting --------------------------------------------------------------------


def measured(scheme, dims, config, seed=0):
    rng = np.random.default_rng(seed)
    t, r, s = dims
    metrics = Metrics()
    multiply(config.base.random((t, r), rng), config.base.random((r, s), rng), config, metrics=metrics)
    return metrics


def test_cost_profile_examples():
    dims = (4, 4, 4)
    plain = SingleConfig("plain", Z4, 8, 2, 2, 1, m=3)
    assert cost_profile("plain", dims, plain) == {"upload": 384, "download": 48}
    one = SingleConfig("rmfe_i", Z4, 8, 2, 2, 1, n=2, m=3)
    assert cost_profile("rmfe_i", dims, one) == {"upload": 192, "download": 48}
    two = SingleConfig("rmfe_ii", Z4, 8, 2, 2, 1, n=2, m=3)
    assert cost_profile("rmfe_ii", dims, two)["download"] == 24
    with pytest.raises(errors.SchemeMismatch):
        cost_profile("plain", dims, one)


def test_cost_profile_two_levels_closed_form():
    # upload scaled by m/n and download by m/n^2 relative to the unsplit shapes
    config = SingleConfig("rmfe_ii", Z4, 8, 2, 2, 1, n=2, levels=2, m=9)
    t, r, s = 8, 4, 8
    cost = cost_profile("rmfe_ii", (t, r, s), config)
    assert cost["upload"] * 2 == 8 * (t * r // 2 + r * s // 2) * 9
    assert cost["download"] * 4 == 4 * (t * s // 4) * 9


@pytest.mark.parametrize("scheme,base,kw", SWEEP, ids=lambda x: repr(x) if not isinstance(x, dict) else "")
def test_measured_counts_equal_cost_profile(scheme, base, kw):
    config = SingleConfig(scheme, base, **kw)
    mt, mr, ms = config.block_multiples()
    dims = (2 * mt, 2 * mr, 2 * ms)
    metrics = measured(scheme, dims, config)
    cost = cost_profile(scheme, dims, config)
    assert (metrics.upload_base_elements, metrics.download_base_elements) == (cost["upload"], cost["download"])
    ep = config.ep
    want = ep_wire_counts(*config.ep_dims(*dims), ep.u, ep.v, ep.w, ep.N, config.m_total)
    assert (cost["upload"], cost["download"]) == want


def test_ratios_at_two_slots():
    dims = (8, 8, 8)
    plain = measured("plain", dims, SingleConfig("plain", W64, 8, 2, 2, 1, m=3))
    one = measured("rmfe_i", dims, SingleConfig("rmfe_i", W64, 8, 2, 2, 1, n=2, m=3))
    two = measured("rmfe_ii", dims, SingleConfig("rmfe_ii", W64, 8, 2, 2, 1, n=2, m=3))
    assert 2 * one.upload_base_elements == plain.upload_base_elements
    assert one.download_base_elements == plain.download_base_elements
    assert 2 * two.download_base_elements == plain.download_base_elements
    # workers multiply blocks half as large along the split axis
    assert plain.worker_product_dims == (4, 8, 4)
    assert one.worker_product_dims == (4, 4, 4)
    assert two.worker_product_dims == (4, 8, 2)


def test_dimension_errors():
    with pytest.raises(errors.IndivisibleDimensions):
        single_multiply_I(Z4.zeros((4, 3)), Z4.zeros((3, 4)), SingleConfig("rmfe_i", Z4, 8, 2, 2, 1, n=2))
    with pytest.raises(errors.IndivisibleDimensions):
        single_multiply_II(Z4.zeros((4, 4)), Z4.zeros((4, 2)), SingleConfig("rmfe_ii", Z4, 8, 2, 2, 1, n=2))
    with pytest.raises(errors.ShapeMismatch):
        plain_ep(Z4.zeros((4, 4)), Z4.zeros((2, 4)), SingleConfig("plain", Z4, 8, 2, 2, 1))
    with pytest.raises(errors.SchemeMismatch):
        plain_ep(Z4.zeros((4, 4)), Z4.zeros((4, 4)), SingleConfig("rmfe_i", Z4, 8, 2, 2, 1, n=2))
    with pytest.raises(errors.ThresholdExceedsWorkers):
        plain_ep(Z4.zeros((4, 4)), Z4.zeros((4, 4)), SingleConfig("plain", Z4, 3, 2, 2, 1))
