"""Online adaptive filters sharing one per-sample stepping interface.

The asymmetric-kernel update (with the symmetric-kernel method as its
equal-bandwidth special case) plus four classic robust baselines: LMS,
sign algorithm, Hampel-score least mean M-estimate, and logarithmic LAD.
All updates have the form W <- W + mu * score(e) * x and differ only in
the score function.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from . import _scalar
from ._backend import filter_loop
from .kernels import KernelBandwidths


class DivergenceError(RuntimeError):
    """A weight update produced non-finite weights.

    Attributes
    ----------
    iteration : int
        Index of the sample whose update diverged.
    """

    def __init__(self, iteration):
        super().__init__(
            f"filter weights became non-finite at iteration {iteration}"
        )
        self.iteration = int(iteration)


class Algorithm(enum.Enum):
    MACC = "macc"
    MCC = "mcc"
    LMS = "lms"
    SA = "sa"
    LMM = "lmm"
    LLAD = "llad"


@dataclass(frozen=True)
class LmmParams:
    """Hampel three-part score parameters, 0 < xi <= delta1 < delta2."""

    xi: float
    delta1: float
    delta2: float

    def __post_init__(self):
        for name in ("xi", "delta1", "delta2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not (self.xi <= self.delta1 < self.delta2):
            raise ValueError(
                "require xi <= delta1 < delta2, got "
                f"xi={self.xi}, delta1={self.delta1}, delta2={self.delta2}"
            )


@dataclass(frozen=True)
class AlgorithmConfig:
    """Algorithm choice plus its step size and parameter group.

    Only the group matching `algorithm` is required; the others are
    ignored if present.
    """

    algorithm: Algorithm
    step_size: float
    macc_bandwidths: Optional[KernelBandwidths] = None
    mcc_bandwidth: Optional[float] = None
    lmm_params: Optional[LmmParams] = None
    llad_alpha: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.algorithm, Algorithm):
            raise TypeError(f"algorithm must be Algorithm, got {self.algorithm!r}")
        if not (math.isfinite(self.step_size) and self.step_size > 0.0):
            raise ValueError(f"step_size must be positive and finite, got {self.step_size}")
        a = self.algorithm
        if a is Algorithm.MACC:
            if self.macc_bandwidths is None:
                raise ValueError("MACC requires macc_bandwidths")
        elif a is Algorithm.MCC:
            s = self.mcc_bandwidth
            if s is None or not (math.isfinite(s) and s > 0.0):
                raise ValueError(f"MCC requires a positive finite mcc_bandwidth, got {s}")
        elif a is Algorithm.LMM:
            if self.lmm_params is None:
                raise ValueError("LMM requires lmm_params")
        elif a is Algorithm.LLAD:
            al = self.llad_alpha
            if al is None or not (math.isfinite(al) and al > 0.0):
                raise ValueError(f"LLAD requires a positive finite llad_alpha, got {al}")

    def loop_params(self) -> Tuple[int, float, float, float]:
        """(algorithm code, p1, p2, p3) for the inner loops."""
        a = self.algorithm
        if a is Algorithm.MACC:
            bw = self.macc_bandwidths
            return _scalar.ALGO_KERNEL, bw.sigma_plus, bw.sigma_minus, 0.0
        if a is Algorithm.MCC:
            # same code path as MACC with equal bandwidths, so the two are
            # bit-identical by construction
            s = float(self.mcc_bandwidth)
            return _scalar.ALGO_KERNEL, s, s, 0.0
        if a is Algorithm.LMS:
            return _scalar.ALGO_LMS, 0.0, 0.0, 0.0
        if a is Algorithm.SA:
            return _scalar.ALGO_SA, 0.0, 0.0, 0.0
        if a is Algorithm.LMM:
            p = self.lmm_params
            return _scalar.ALGO_LMM, p.xi, p.delta1, p.delta2
        if a is Algorithm.LLAD:
            return _scalar.ALGO_LLAD, float(self.llad_alpha), 0.0, 0.0
        raise ValueError(f"unhandled algorithm {a}")


@dataclass(frozen=True)
class FilterState:
    """Weight estimate after `iteration` accepted steps."""

    weights: np.ndarray
    dim: int
    iteration: int = 0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1:
            raise ValueError(f"weights must be a vector, got shape {w.shape}")
        if w.shape[0] != self.dim:
            raise ValueError(f"weights has {w.shape[0]} entries, expected dim={self.dim}")
        if self.dim <= 0:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if self.iteration < 0:
            raise ValueError(f"iteration must be non-negative, got {self.iteration}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "weights", w)

    @classmethod
    def zeros(cls, dim: int) -> "FilterState":
        """Null initial weight vector (the conventional starting point)."""
        return cls(weights=np.zeros(int(dim)), dim=int(dim), iteration=0)


@dataclass(frozen=True)
class Trajectory:
    """Per-iteration records from run(); arrays all share one length.

    e is the prediction error with pre-update weights.  When a reference
    weight vector was supplied, ea is the a priori error (W* - W_i)^T x_i
    and wep is the squared weight-error norm ||W* - W_i||^2, both with the
    pre-update W_i.
    """

    e: np.ndarray
    ea: Optional[np.ndarray]
    wep: Optional[np.ndarray]
    final_state: FilterState

    def __len__(self):
        return self.e.shape[0]


def step(state: FilterState, x, d: float, cfg: AlgorithmConfig):
    """One weight update.  Returns (new_state, e) with e from pre-update weights."""
    xv = np.asarray(x, dtype=float)
    if xv.ndim != 1 or xv.shape[0] != state.dim:
        raise ValueError(f"x must be a vector of length {state.dim}, got shape {xv.shape}")
    if not np.all(np.isfinite(xv)):
        raise ValueError("x must be finite")
    d = float(d)
    if not math.isfinite(d):
        raise ValueError(f"d must be finite, got {d}")

    algo, p1, p2, p3 = cfg.loop_params()
    wl = state.weights.tolist()
    xl = xv.tolist()
    e = d - _scalar.seq_dot(wl, xl)
    factor = cfg.step_size * _scalar.score(e, algo, p1, p2, p3)
    new_w = [wl[j] + factor * xl[j] for j in range(state.dim)]
    for v in new_w:
        if not math.isfinite(v):
            raise DivergenceError(state.iteration)
    new_state = FilterState(
        weights=np.asarray(new_w), dim=state.dim, iteration=state.iteration + 1
    )
    return new_state, e


def _coerce_inputs(inputs, dim):
    """Accept a (X, d) array pair or an iterable of (x, d) pairs."""
    if (
        isinstance(inputs, tuple)
        and len(inputs) == 2
        and hasattr(inputs[0], "ndim")
        and getattr(inputs[0], "ndim", 0) == 2
    ):
        X = np.ascontiguousarray(inputs[0], dtype=float)
        dv = np.ascontiguousarray(inputs[1], dtype=float)
    else:
        pairs = list(inputs)
        if not pairs:
            return np.empty((0, dim)), np.empty(0)
        X = np.ascontiguousarray([p[0] for p in pairs], dtype=float)
        dv = np.ascontiguousarray([p[1] for p in pairs], dtype=float)
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"inputs must have row length {dim}, got shape {X.shape}")
    if dv.ndim != 1 or dv.shape[0] != X.shape[0]:
        raise ValueError(
            f"targets must be a vector of length {X.shape[0]}, got shape {dv.shape}"
        )
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(dv))):
        raise ValueError("inputs and targets must be finite")
    return X, dv


def run(
    initial: FilterState,
    inputs,
    cfg: AlgorithmConfig,
    reference=None,
) -> Trajectory:
    """Iterate step() over a sample sequence, recording per-iteration errors.

    `inputs` is either an iterable of (x, d) pairs or a two-tuple (X, d)
    with X of shape (n, dim).  With a reference weight vector, the a
    priori error and weight error power are recorded as well.  Raises
    DivergenceError (with the failing index) if weights leave the finite
    range.
    """
    X, dv = _coerce_inputs(inputs, initial.dim)
    n = X.shape[0]
    if n == 0:
        ea = wep = None
        if reference is not None:
            ea = np.empty(0)
            wep = np.empty(0)
        return Trajectory(e=np.empty(0), ea=ea, wep=wep, final_state=initial)

    has_ref = reference is not None
    if has_ref:
        w_star = np.ascontiguousarray(reference, dtype=float)
        if w_star.shape != (initial.dim,):
            raise ValueError(
                f"reference must have shape ({initial.dim},), got {w_star.shape}"
            )
        if not np.all(np.isfinite(w_star)):
            raise ValueError("reference must be finite")
    else:
        w_star = np.empty(0)

    algo, p1, p2, p3 = cfg.loop_params()
    w = initial.weights.copy()
    e_out = np.empty(n)
    ea_out = np.empty(n if has_ref else 0)
    wep_out = np.empty(n if has_ref else 0)

    bad = filter_loop(
        w, X, dv, algo, cfg.step_size, p1, p2, p3,
        w_star, has_ref, e_out, ea_out, wep_out,
    )
    if bad >= 0:
        raise DivergenceError(initial.iteration + bad)

    final = FilterState(weights=w, dim=initial.dim, iteration=initial.iteration + n)
    return Trajectory(
        e=e_out,
        ea=ea_out if has_ref else None,
        wep=wep_out if has_ref else None,
        final_state=final,
    )
