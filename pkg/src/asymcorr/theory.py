"""Steady-state EMSE prediction by numerical integration.

The prediction needs three expectations of kernel-score functions under
the noise density.  Integration is split per mixture component and again
at every non-smooth point (the score branch at 0, density kinks, support
edges), with a geometric ladder of panel edges so that narrow features
near the origin are never skipped over by the adaptive rule.
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

from scipy.integrate import quad

from .filters import Algorithm, AlgorithmConfig
from .kernels import (
    KernelBandwidths,
    eval_score,
    eval_score_double_prime,
    eval_score_prime,
)
from .noise import NoiseModel


class QuadratureError(RuntimeError):
    """Integration error estimate exceeded the requested tolerance."""

    def __init__(self, achieved, requested):
        super().__init__(
            f"quadrature error estimate {achieved:.3e} exceeds "
            f"requested tolerance {requested:.3e}"
        )
        self.achieved = float(achieved)
        self.requested = float(requested)


class TheoryValidityError(ValueError):
    """Prediction denominator is non-positive: outside the formula's regime.

    Carries the computed expectation components so callers can still
    report them.
    """

    def __init__(self, e_psi_sq, e_psi_prime, e_combo, denominator):
        super().__init__(
            "steady-state prediction denominator is non-positive "
            f"({denominator:.6e}); the small-step analysis does not apply"
        )
        self.e_psi_sq = e_psi_sq
        self.e_psi_prime = e_psi_prime
        self.e_combo = e_combo
        self.denominator = denominator


@dataclass(frozen=True)
class EmsePrediction:
    """Steady-state EMSE S with the expectations that produced it."""

    S: float
    e_psi_sq: float
    e_psi_prime: float
    e_combo: float
    trace_rx: float
    step_size: float


def _panel_edges(lo, hi, anchors, ladder_scale):
    """Sorted panel edges for [lo, hi]: anchors plus a geometric ladder."""
    pts = {lo, hi}
    for a in anchors:
        if lo < a < hi:
            pts.add(float(a))
    s = ladder_scale
    # geometric ladder out from 0 in both directions, ratio 4
    if s > 0.0 and math.isfinite(s):
        for sign in (1.0, -1.0):
            p = sign * s
            while lo < p < hi:
                pts.add(p)
                p *= 4.0
    return sorted(pts)


def expect(
    f: Callable[[float], float],
    model: NoiseModel,
    abs_tol: float = 1e-10,
    breakpoints: Iterable[float] = (),
    scale_hint: float = None,
) -> float:
    """Integral of f(v) * density(v) over the mixture's support.

    `breakpoints` are extra non-smooth points of f (the score branch at 0
    is always included); `scale_hint` is the finest feature width of f,
    used to seed the panel ladder.  Raises QuadratureError when the summed
    error estimate exceeds abs_tol.
    """
    if not (abs_tol > 0.0 and math.isfinite(abs_tol)):
        raise ValueError(f"abs_tol must be positive and finite, got {abs_tol}")
    extra = tuple(float(b) for b in breakpoints)

    jobs = []
    for weight, comp in model.components():
        lo, hi = comp.support()
        scale = comp.scale()
        if scale_hint is not None and scale_hint > 0.0:
            scale = min(scale, float(scale_hint))
        anchors = (0.0,) + tuple(comp.breakpoints()) + extra
        edges = _panel_edges(lo, hi, anchors, scale)
        pdf = comp.pdf
        for a, b in zip(edges[:-1], edges[1:]):
            jobs.append((weight, pdf, a, b))

    if not jobs:
        return 0.0
    per_panel = abs_tol / len(jobs)

    total = 0.0
    err = 0.0
    for weight, pdf, a, b in jobs:
        def integrand(v, _pdf=pdf):
            return f(v) * _pdf(v)

        res = quad(
            integrand, a, b,
            epsabs=per_panel / weight,
            epsrel=1e-12,
            limit=200,
            full_output=1,
        )
        total += weight * res[0]
        err += weight * res[1]

    if err > abs_tol:
        raise QuadratureError(err, abs_tol)
    return total


def macc_expectations(
    bandwidths: KernelBandwidths,
    model: NoiseModel,
    abs_tol: float = 1e-10,
) -> Tuple[float, float, float]:
    """(E[psi^2], E[psi'], E[psi*psi'' + psi'^2]) under the noise density."""
    hint = min(bandwidths.sigma_plus, bandwidths.sigma_minus)

    def psi_sq(v):
        p = eval_score(v, bandwidths)
        return p * p

    def psi_prime(v):
        return eval_score_prime(v, bandwidths)

    def combo(v):
        p = eval_score(v, bandwidths)
        pp = eval_score_prime(v, bandwidths)
        return p * eval_score_double_prime(v, bandwidths) + pp * pp

    e_psi_sq = expect(psi_sq, model, abs_tol, scale_hint=hint)
    e_psi_prime = expect(psi_prime, model, abs_tol, scale_hint=hint)
    e_combo = expect(combo, model, abs_tol, scale_hint=hint)
    return e_psi_sq, e_psi_prime, e_combo


def emse_from_expectations(
    step_size: float,
    trace_rx: float,
    e_psi_sq: float,
    e_psi_prime: float,
    e_combo: float,
) -> EmsePrediction:
    """Assemble the steady-state EMSE from precomputed expectations."""
    if not (step_size > 0.0 and math.isfinite(step_size)):
        raise ValueError(f"step_size must be positive and finite, got {step_size}")
    if not (trace_rx > 0.0 and math.isfinite(trace_rx)):
        raise ValueError(f"trace_rx must be positive and finite, got {trace_rx}")
    mt = step_size * trace_rx
    denominator = 2.0 * e_psi_prime - mt * e_combo
    if denominator <= 0.0:
        raise TheoryValidityError(e_psi_sq, e_psi_prime, e_combo, denominator)
    return EmsePrediction(
        S=mt * e_psi_sq / denominator,
        e_psi_sq=e_psi_sq,
        e_psi_prime=e_psi_prime,
        e_combo=e_combo,
        trace_rx=trace_rx,
        step_size=step_size,
    )


def _kernel_bandwidths(cfg: AlgorithmConfig) -> KernelBandwidths:
    if cfg.algorithm is Algorithm.MACC:
        return cfg.macc_bandwidths
    if cfg.algorithm is Algorithm.MCC:
        s = float(cfg.mcc_bandwidth)
        return KernelBandwidths(sigma_plus=s, sigma_minus=s)
    raise ValueError(
        f"steady-state prediction applies to kernel algorithms only, got {cfg.algorithm}"
    )


def predict_emse(
    cfg: AlgorithmConfig,
    model: NoiseModel,
    trace_rx: float,
    abs_tol: float = 1e-10,
) -> EmsePrediction:
    """Steady-state EMSE for a kernel-score filter under the noise model."""
    bw = _kernel_bandwidths(cfg)
    e_psi_sq, e_psi_prime, e_combo = macc_expectations(bw, model, abs_tol)
    return emse_from_expectations(
        cfg.step_size, trace_rx, e_psi_sq, e_psi_prime, e_combo
    )
