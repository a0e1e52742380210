import numpy as np
import pytest

import isconv

LENET = dict(C=20, H_in=11, W_in=11, K=64, R=5, S=5, P=1, T=2)


def test_output_dims_and_dense_macs():
    p = isconv.ConvParams(**LENET)
    assert isconv.output_dims(p) == (5, 5)
    assert isconv.dense_macs(p) == 800_000


def test_invalid_params_raise():
    with pytest.raises(isconv.ValidationError):
        isconv.ConvParams(C=1, H_in=3, W_in=3, K=1, R=5, S=5)


def test_three_algorithms_agree():
    p = isconv.ConvParams(**LENET)
    x = isconv.gen_sparse_input(7, p, 0.9)
    w = isconv.gen_kernel(7, p)
    ref = isconv.direct_conv(x, w, p)
    assert ref.shape == (64, 5, 5) and ref.dtype == np.float32
    np.testing.assert_allclose(isconv.gemm_conv(x, w, p), ref, rtol=1e-4, atol=1e-6)
    out, counters = isconv.isc_conv(x, w, p, with_counters=True)
    np.testing.assert_allclose(out, ref, rtol=1e-4, atol=1e-6)
    assert counters.macs == isconv.effective_macs(x, p)["exact"]


def test_matches_numpy_convolution():
    rng = np.random.default_rng(3)
    p = isconv.ConvParams(C=3, H_in=6, W_in=5, K=2, R=3, S=2, P=1, T=2)
    x = rng.standard_normal((3, 6, 5)).astype(np.float32)
    w = rng.standard_normal((2, 3, 3, 2)).astype(np.float32)
    xp = np.pad(x.astype(np.float64), ((0, 0), (1, 1), (1, 1)))
    ho, wo = isconv.output_dims(p)
    want = np.empty((2, ho, wo))
    for i in range(ho):
        for j in range(wo):
            patch = xp[:, 2 * i : 2 * i + 3, 2 * j : 2 * j + 2]
            want[:, i, j] = np.tensordot(w, patch, axes=3)
    np.testing.assert_allclose(isconv.isc_conv(x, w, p), want, rtol=1e-4, atol=1e-5)


def test_compress_round_trip():
    x = isconv.relu(np.random.default_rng(1).standard_normal((4, 7, 7)).astype(np.float32))
    s = isconv.compress(x)
    assert s.shape == (4, 7, 7)
    assert s.nnz == np.count_nonzero(x)
    assert s.coords.shape == (s.nnz, 3)
    np.testing.assert_array_equal(s.decompress(), x)
    assert isconv.measure_sparsity(x) == pytest.approx(1 - s.nnz / x.size)


def test_shape_mismatch_raises():
    p = isconv.ConvParams(C=2, H_in=4, W_in=4, K=1, R=3, S=3)
    with pytest.raises(isconv.ShapeError):
        isconv.direct_conv(np.zeros((3, 4, 4), np.float32), np.zeros((1, 2, 3, 3), np.float32), p)


def test_layer_specs_and_suite():
    specs = isconv.default_layer_specs()
    assert len(specs) == 10
    assert specs[0].name == "LeNet-Conv2" and specs[0].sparsity == pytest.approx(0.95)
    with pytest.raises(isconv.ParseError):
        isconv.parse_layer_specs("name,C,H,W,K,R,S,P,T,sparsity\nx,1,2\n")
    csv = isconv.run_suite(specs[:2], algos="gemm,isc", verify_only=True)
    lines = csv.strip().splitlines()
    assert lines[0].startswith("layer,algo,")
    assert len(lines) == 5
    assert csv == isconv.run_suite(specs[:2], algos="gemm,isc", verify_only=True)
