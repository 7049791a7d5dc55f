"""Asymmetric Gaussian kernel and its score/weight functions.

The kernel uses two bandwidths: ``sigma_plus`` scales errors >= 0 and
``sigma_minus`` scales errors < 0. With equal bandwidths every function
here degenerates to its symmetric Gaussian counterpart. All functions are
pure, accept scalars or ndarrays, and reject non-finite inputs.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "KernelBandwidths",
    "eval_kernel",
    "eval_score",
    "eval_score_prime",
    "eval_score_double_prime",
    "eval_weight_xi",
]


@dataclass(frozen=True)
class KernelBandwidths:
    """Bandwidth pair (sigma_plus for e >= 0, sigma_minus for e < 0).

    Both bandwidths must be positive and finite. When they are equal the
    asymmetric kernel is exactly the symmetric Gaussian kernel.
    """

    sigma_plus: float
    sigma_minus: float

    def __post_init__(self):
        for name in ("sigma_plus", "sigma_minus"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be a positive finite real, got {value!r}")

    @property
    def is_symmetric(self) -> bool:
        return self.sigma_plus == self.sigma_minus


def _checked(e, name="e"):
    arr = np.asarray(e, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def _as_input(result, arr):
    # scalar in -> float out, array in -> array out
    if arr.ndim == 0:
        return float(result)
    return result


def eval_kernel(e, bw: KernelBandwidths):
    """Asymmetric Gaussian kernel exp(-e^2 / (2 sigma^2)), branch by sign(e).

    Values lie in (0, 1] with the maximum attained only at e = 0. The
    e >= 0 branch uses ``sigma_plus``, the e < 0 branch ``sigma_minus``.
    """
    arr = _checked(e)
    sp, sm = bw.sigma_plus, bw.sigma_minus
    pos = np.exp(-(arr * arr) / (2.0 * sp * sp))
    neg = np.exp(-(arr * arr) / (2.0 * sm * sm))
    return _as_input(np.where(arr >= 0, pos, neg), arr)


def eval_score(e, bw: KernelBandwidths):
    """Score function psi(e) = (e / sigma^2) exp(-e^2 / (2 sigma^2)).

    This is minus the derivative of :func:`eval_kernel` with respect to e;
    it is the per-sample update factor of the stochastic-gradient filter.
    Continuous at 0 (value 0 from both sides), sign(psi(e)) = sign(e).
    """
    arr = _checked(e)
    sp, sm = bw.sigma_plus, bw.sigma_minus
    pos = (arr / (sp * sp)) * np.exp(-(arr * arr) / (2.0 * sp * sp))
    neg = (arr / (sm * sm)) * np.exp(-(arr * arr) / (2.0 * sm * sm))
    return _as_input(np.where(arr >= 0, pos, neg), arr)


def eval_score_prime(v, bw: KernelBandwidths):
    """First derivative of the score, branch by sign(v) (v = 0 uses the
    positive branch, so the value at 0 is 1 / sigma_plus^2)."""
    arr = _checked(v, "v")
    sp2 = bw.sigma_plus * bw.sigma_plus
    sm2 = bw.sigma_minus * bw.sigma_minus
    pos = (1.0 / sp2) * np.exp(-(arr * arr) / (2.0 * sp2)) * (1.0 - (arr * arr) / sp2)
    neg = (1.0 / sm2) * np.exp(-(arr * arr) / (2.0 * sm2)) * (1.0 - (arr * arr) / sm2)
    return _as_input(np.where(arr >= 0, pos, neg), arr)


def eval_score_double_prime(v, bw: KernelBandwidths):
    """Second derivative of the score, branch by sign(v)."""
    arr = _checked(v, "v")
    sp2 = bw.sigma_plus * bw.sigma_plus
    sm2 = bw.sigma_minus * bw.sigma_minus
    pos = (1.0 / sp2) * np.exp(-(arr * arr) / (2.0 * sp2)) * (
        arr ** 3 / (sp2 * sp2) - 3.0 * arr / sp2
    )
    neg = (1.0 / sm2) * np.exp(-(arr * arr) / (2.0 * sm2)) * (
        arr ** 3 / (sm2 * sm2) - 3.0 * arr / sm2
    )
    return _as_input(np.where(arr >= 0, pos, neg), arr)


def eval_weight_xi(e, bw: KernelBandwidths):
    """Fixed-point weight xi(e) = (1 / (2 sigma^2)) exp(-e^2 / (2 sigma^2)).

    Strictly positive; satisfies psi(e) = 2 e xi(e). This is the sample
    weight of the iteratively reweighted batch solution.
    """
    arr = _checked(e)
    sp2 = bw.sigma_plus * bw.sigma_plus
    sm2 = bw.sigma_minus * bw.sigma_minus
    pos = (1.0 / (2.0 * sp2)) * np.exp(-(arr * arr) / (2.0 * sp2))
    neg = (1.0 / (2.0 * sm2)) * np.exp(-(arr * arr) / (2.0 * sm2))
    return _as_input(np.where(arr >= 0, pos, neg), arr)
