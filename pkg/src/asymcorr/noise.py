"""Noise component distributions and the two-component mixture model.

Each component supports vectorized pdf/cdf evaluation and reproducible
sampling from a numpy Generator.  The mixture draws each sample from the
outlier component with a fixed occurrence probability and from the main
component otherwise.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import stats


def _check_positive(name, v):
    if not (math.isfinite(v) and v > 0.0):
        raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class Gaussian:
    """Normal distribution with the given mean and variance."""

    mean: float
    variance: float

    def __post_init__(self):
        if not math.isfinite(self.mean):
            raise ValueError(f"mean must be finite, got {self.mean}")
        _check_positive("variance", self.variance)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    def pdf(self, v):
        v = np.asarray(v, dtype=float)
        s = self.std
        z = (v - self.mean) / s
        out = np.exp(-0.5 * z * z) / (s * math.sqrt(2.0 * math.pi))
        return out if out.ndim else float(out)

    def cdf(self, v):
        v = np.asarray(v, dtype=float)
        out = stats.norm.cdf(v, loc=self.mean, scale=self.std)
        return out if np.ndim(out) else float(out)

    def sample(self, rng, n):
        return self.mean + self.std * rng.standard_normal(int(n))

    def moments(self) -> Tuple[float, float]:
        return self.mean, self.variance

    def support(self) -> Tuple[float, float]:
        r = 40.0 * self.std
        return self.mean - r, self.mean + r

    def breakpoints(self) -> Tuple[float, ...]:
        return ()

    def scale(self) -> float:
        return self.std


@dataclass(frozen=True)
class SplitGaussian:
    """Two half-Gaussians glued at zero, each with its own variance.

    The density uses the full-Gaussian normalization on each side, so each
    branch carries probability mass 1/2; v = 0 belongs to the positive
    branch.
    """

    var_neg: float
    var_pos: float

    def __post_init__(self):
        _check_positive("var_neg", self.var_neg)
        _check_positive("var_pos", self.var_pos)

    @property
    def std_neg(self) -> float:
        return math.sqrt(self.var_neg)

    @property
    def std_pos(self) -> float:
        return math.sqrt(self.var_pos)

    def pdf(self, v):
        v = np.asarray(v, dtype=float)
        sn, sp = self.std_neg, self.std_pos
        c = math.sqrt(2.0 * math.pi)
        neg = np.exp(-(v * v) / (2.0 * self.var_neg)) / (sn * c)
        pos = np.exp(-(v * v) / (2.0 * self.var_pos)) / (sp * c)
        out = np.where(v < 0.0, neg, pos)
        return out if out.ndim else float(out)

    def cdf(self, v):
        # each full-Gaussian CDF already puts mass 1/2 on its own side
        v = np.asarray(v, dtype=float)
        out = np.where(
            v < 0.0,
            stats.norm.cdf(v, scale=self.std_neg),
            stats.norm.cdf(v, scale=self.std_pos),
        )
        return out if out.ndim else float(out)

    def sample(self, rng, n):
        n = int(n)
        take_neg = rng.random(n) < 0.5
        mag = np.abs(rng.standard_normal(n))
        return np.where(take_neg, -mag * self.std_neg, mag * self.std_pos)

    def moments(self) -> Tuple[float, float]:
        sn, sp = self.std_neg, self.std_pos
        mean = (sp - sn) / math.sqrt(2.0 * math.pi)
        second = 0.5 * (self.var_neg + self.var_pos)
        return mean, second - mean * mean

    def support(self) -> Tuple[float, float]:
        return -40.0 * self.std_neg, 40.0 * self.std_pos

    def breakpoints(self) -> Tuple[float, ...]:
        return (0.0,)

    def scale(self) -> float:
        return min(self.std_neg, self.std_pos)


@dataclass(frozen=True)
class ShiftedF:
    """F(d1, d2) distribution translated so its mode sits at zero.

    The mode of F(d1, d2) is ((d1-2)/d1) * (d2/(d2+2)) for d1 > 2 (zero
    otherwise), so the support becomes [-mode, infinity).  No rescaling is
    applied.
    """

    d1: int
    d2: int

    def __post_init__(self):
        for name in ("d1", "d2"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and v > 0):
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @property
    def mode(self) -> float:
        if self.d1 > 2:
            return ((self.d1 - 2) / self.d1) * (self.d2 / (self.d2 + 2))
        return 0.0

    def pdf(self, v):
        v = np.asarray(v, dtype=float)
        out = stats.f.pdf(v + self.mode, self.d1, self.d2)
        return out if np.ndim(out) else float(out)

    def cdf(self, v):
        v = np.asarray(v, dtype=float)
        out = stats.f.cdf(v + self.mode, self.d1, self.d2)
        return out if np.ndim(out) else float(out)

    def sample(self, rng, n):
        # F draw as the ratio of scaled chi-square draws, then center the mode
        n = int(n)
        num = rng.chisquare(self.d1, n) / self.d1
        den = rng.chisquare(self.d2, n) / self.d2
        return num / den - self.mode

    def moments(self) -> Tuple[float, float]:
        d1, d2 = self.d1, self.d2
        if d2 <= 2:
            return math.inf, math.inf
        mean = d2 / (d2 - 2) - self.mode
        if d2 <= 4:
            return mean, math.inf
        var = (2.0 * d2 * d2 * (d1 + d2 - 2)) / (d1 * (d2 - 2) ** 2 * (d2 - 4))
        return mean, var

    def support(self) -> Tuple[float, float]:
        # upper truncation where the density has fallen below 1e-16
        hi = 1.0
        while float(self.pdf(hi)) > 1e-16:
            hi *= 2.0
        return -self.mode, hi

    def breakpoints(self) -> Tuple[float, ...]:
        return (-self.mode,)

    def scale(self) -> float:
        _, var = self.moments()
        if math.isfinite(var):
            return math.sqrt(var)
        # interquartile-range fallback when the variance does not exist
        q1, q3 = stats.f.ppf([0.25, 0.75], self.d1, self.d2)
        return float(q3 - q1)


@dataclass(frozen=True)
class NoiseModel:
    """Mixture: draw from `outlier` with probability c, else from `main`."""

    occurrence_prob: float
    main: object
    outlier: object

    def __post_init__(self):
        c = self.occurrence_prob
        if not (math.isfinite(c) and 0.0 <= c <= 1.0):
            raise ValueError(f"occurrence_prob must lie in [0, 1], got {c}")
        for name in ("main", "outlier"):
            comp = getattr(self, name)
            if not isinstance(comp, (Gaussian, SplitGaussian, ShiftedF)):
                raise TypeError(f"{name} must be a component distribution, got {comp!r}")

    def density(self, v):
        c = self.occurrence_prob
        out = (1.0 - c) * np.asarray(self.main.pdf(v)) + c * np.asarray(
            self.outlier.pdf(v)
        )
        return out if out.ndim else float(out)

    def cdf(self, v):
        c = self.occurrence_prob
        out = (1.0 - c) * np.asarray(self.main.cdf(v)) + c * np.asarray(
            self.outlier.cdf(v)
        )
        return out if out.ndim else float(out)

    def sample(self, rng, n):
        n = int(n)
        use_outlier = rng.random(n) < self.occurrence_prob
        main_draws = self.main.sample(rng, n)
        outlier_draws = self.outlier.sample(rng, n)
        return np.where(use_outlier, outlier_draws, main_draws)

    def moments(self) -> Tuple[float, float]:
        c = self.occurrence_prob
        m_a, v_a = self.main.moments()
        m_b, v_b = self.outlier.moments()
        mean = (1.0 - c) * m_a + c * m_b
        second = (1.0 - c) * (v_a + m_a * m_a) + c * (v_b + m_b * m_b)
        return mean, second - mean * mean

    def components(self):
        """(weight, component) pairs with non-zero weight."""
        c = self.occurrence_prob
        out = []
        if c < 1.0:
            out.append((1.0 - c, self.main))
        if c > 0.0:
            out.append((c, self.outlier))
        return out
