"""Kernel, score, and weight-function checks against independent oracles."""

import numpy as np
import pytest

from asymcorr import (
    KernelBandwidths,
    eval_kernel,
    eval_score,
    eval_score_double_prime,
    eval_score_prime,
    eval_weight_xi,
)


def test_bandwidth_validation():
    KernelBandwidths(0.5, 2.0)
    with pytest.raises(ValueError):
        KernelBandwidths(0.0, 1.0)
    with pytest.raises(ValueError):
        KernelBandwidths(1.0, -2.0)
    with pytest.raises(ValueError):
        KernelBandwidths(np.inf, 1.0)
    with pytest.raises(ValueError):
        KernelBandwidths(1.0, np.nan)


def test_is_symmetric():
    assert KernelBandwidths(1.3, 1.3).is_symmetric
    assert not KernelBandwidths(0.5, 2.0).is_symmetric


def test_kernel_hand_values():
    bw = KernelBandwidths(sigma_plus=1.0, sigma_minus=2.0)
    assert eval_kernel(0.0, bw) == 1.0
    assert eval_kernel(1.0, bw) == pytest.approx(np.exp(-0.5), rel=1e-15)
    assert eval_kernel(-1.0, bw) == pytest.approx(np.exp(-0.125), rel=1e-15)


def test_branch_at_zero_uses_positive_side():
    # xi is discontinuous at 0, so it pins down which branch e=0 takes
    bw = KernelBandwidths(sigma_plus=0.5, sigma_minus=2.0)
    assert eval_weight_xi(0.0, bw) == pytest.approx(1.0 / (2.0 * 0.25), rel=1e-15)
    assert eval_weight_xi(-0.0, bw) == eval_weight_xi(0.0, bw)


def test_score_zero_and_sign():
    bw = KernelBandwidths(0.7, 2.2)
    assert eval_score(0.0, bw) == 0.0
    e = np.array([-3.0, -0.1, 0.1, 3.0])
    s = eval_score(e, bw)
    assert np.all(np.sign(s) == np.sign(e))


def test_score_is_two_e_times_xi():
    bw = KernelBandwidths(0.6, 1.7)
    rng = np.random.default_rng(3)
    e = rng.normal(scale=2.0, size=1000)
    np.testing.assert_allclose(
        eval_score(e, bw), 2.0 * e * eval_weight_xi(e, bw), rtol=1e-14
    )


def test_symmetric_reduction_is_exact():
    # equal bandwidths must reproduce the plain Gaussian expressions bit for bit
    rng = np.random.default_rng(11)
    e = rng.normal(scale=3.0, size=10_000)
    sigma = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=10_000))
    bw_vals = np.array(
        [eval_kernel(ei, KernelBandwidths(s, s)) for ei, s in zip(e[:50], sigma[:50])]
    )
    ref_vals = np.exp(-(e[:50] * e[:50]) / (2.0 * sigma[:50] * sigma[:50]))
    assert np.array_equal(bw_vals, ref_vals)
    # vectorized over e for a handful of bandwidths
    for s in (0.3, 1.0, 4.5):
        got = eval_kernel(e, KernelBandwidths(s, s))
        want = np.exp(-(e * e) / (2.0 * s * s))
        assert np.array_equal(got, want)


def _central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


@pytest.mark.parametrize("sp,sn", [(1.0, 1.0), (0.5, 2.0), (0.7, 2.2), (0.32, 3.0)])
def test_derivative_chain_matches_finite_differences(sp, sn):
    # psi = -dA/de, psi' = dpsi/dv, psi'' = dpsi'/dv; 1000 points per branch
    bw = KernelBandwidths(sp, sn)
    rng = np.random.default_rng(17)
    pts = []
    for sigma, sign in ((sp, 1.0), (sn, -1.0)):
        mag = np.exp(rng.uniform(np.log(0.05 * sigma), np.log(5.0 * sigma), 1000))
        pts.append(sign * mag)
    for e in pts:
        scale = np.minimum(sp, sn)
        h = 1e-5 * scale
        # keep stencils away from the branch point
        e = e[np.abs(e) > 4.0 * h]

        fd_psi = -_central_diff(lambda t: eval_kernel(t, bw), e, h)
        np.testing.assert_allclose(eval_score(e, bw), fd_psi, rtol=1e-6)

        fd_prime = _central_diff(lambda t: eval_score(t, bw), e, h)
        np.testing.assert_allclose(eval_score_prime(e, bw), fd_prime, rtol=1e-6)

        fd_dprime = _central_diff(lambda t: eval_score_prime(t, bw), e, h)
        np.testing.assert_allclose(
            eval_score_double_prime(e, bw), fd_dprime, rtol=1e-6, atol=1e-9
        )


def test_score_peak_and_decay():
    # |psi| peaks at |e| = sigma and vanishes for huge errors
    bw = KernelBandwidths(0.8, 2.5)
    e = np.linspace(1e-3, 10.0, 20_000)
    s = eval_score(e, bw)
    assert abs(e[np.argmax(s)] - 0.8) < 2e-3
    assert eval_score(1e6, bw) == 0.0
    assert eval_score(-1e6, bw) == 0.0
    peak = np.exp(-0.5) / 0.8
    assert np.max(s) <= peak * (1.0 + 1e-12)


def test_scalar_and_array_shapes():
    bw = KernelBandwidths(1.0, 2.0)
    assert isinstance(eval_kernel(0.3, bw), float)
    out = eval_kernel(np.zeros((3, 4)), bw)
    assert out.shape == (3, 4)


def test_non_finite_inputs_rejected():
    bw = KernelBandwidths(1.0, 2.0)
    for fn in (eval_kernel, eval_score, eval_score_prime,
               eval_score_double_prime, eval_weight_xi):
        with pytest.raises(ValueError):
            fn(np.array([1.0, np.nan]), bw)
        with pytest.raises(ValueError):
            fn(np.inf, bw)
