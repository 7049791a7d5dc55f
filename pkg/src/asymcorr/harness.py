"""Seeded Monte Carlo experiment runner with CSV reporting.

System identification protocol: unknown weights W*, white Gaussian input,
additive mixture noise, filters started from zero weights.  Each Monte
Carlo run draws its data from a generator seeded with (base_seed, run),
so runs are independent of execution order and identical across the
algorithms that share the run (common random numbers).
"""

import dataclasses
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .filters import Algorithm, AlgorithmConfig, DivergenceError, FilterState, run
from .kernels import KernelBandwidths
from .noise import NoiseModel
from .theory import (
    TheoryValidityError,
    emse_from_expectations,
    macc_expectations,
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Protocol constants for one identification experiment."""

    true_weights: np.ndarray
    input_variance: float
    noise: NoiseModel
    algorithms: Tuple[Tuple[str, AlgorithmConfig], ...]
    num_runs: int
    num_iterations: int
    steady_state_window: int
    base_seed: int
    output_path: Optional[str] = None
    decimation: int = 10

    def __post_init__(self):
        w = np.asarray(self.true_weights, dtype=float)
        if w.ndim != 1 or w.size < 1 or not np.all(np.isfinite(w)):
            raise ValueError("true_weights must be a finite vector")
        object.__setattr__(self, "true_weights", w)
        if not (self.input_variance > 0.0 and math.isfinite(self.input_variance)):
            raise ValueError(f"input_variance must be positive, got {self.input_variance}")
        if not isinstance(self.noise, NoiseModel):
            raise TypeError(f"noise must be a NoiseModel, got {self.noise!r}")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        labels = [label for label, _ in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate algorithm labels: {labels}")
        for label, cfg in self.algorithms:
            if not isinstance(cfg, AlgorithmConfig):
                raise TypeError(f"{label}: expected AlgorithmConfig, got {cfg!r}")
        if self.num_runs < 1:
            raise ValueError(f"num_runs must be positive, got {self.num_runs}")
        if self.num_iterations < 1:
            raise ValueError(f"num_iterations must be positive, got {self.num_iterations}")
        if not (1 <= self.steady_state_window <= self.num_iterations):
            raise ValueError(
                "steady_state_window must lie in [1, num_iterations], got "
                f"{self.steady_state_window}"
            )
        if self.decimation < 1:
            raise ValueError(f"decimation must be positive, got {self.decimation}")

    @property
    def dim(self) -> int:
        return self.true_weights.shape[0]

    @property
    def trace_rx(self) -> float:
        """Tr(Rx) = dim * input_variance for white input."""
        return self.dim * self.input_variance


@dataclass
class AlgorithmSummary:
    """Across-run averages for one algorithm."""

    label: str
    config: AlgorithmConfig
    mean_wep: np.ndarray
    mean_ea_sq: np.ndarray
    steady_state_emse: float
    steady_state_wep: float
    divergence_count: int
    runs_used: int


@dataclass
class IdentificationResult:
    config: ExperimentConfig
    summaries: List[AlgorithmSummary]

    def summary(self, label: str) -> AlgorithmSummary:
        for s in self.summaries:
            if s.label == label:
                return s
        raise KeyError(f"no algorithm labeled {label!r}")


class _KahanAccumulator:
    """Compensated elementwise vector sum (deterministic, order-stable)."""

    def __init__(self, size):
        self.sum = np.zeros(size)
        self._comp = np.zeros(size)

    def add(self, x):
        y = x - self._comp
        t = self.sum + y
        self._comp = (t - self.sum) - y
        self.sum = t


def run_data(config: ExperimentConfig, run_index: int):
    """Input matrix, targets, and noise draws for one Monte Carlo run.

    The stream is seeded with (base_seed, run_index), so any subset of
    runs can be regenerated in any order.
    """
    rng = np.random.default_rng((config.base_seed, run_index))
    n, m = config.num_iterations, config.dim
    X = math.sqrt(config.input_variance) * rng.standard_normal((n, m))
    v = config.noise.sample(rng, n)
    d = X @ config.true_weights + v
    return X, d, v


def run_identification(config: ExperimentConfig) -> IdentificationResult:
    """Average WEP and a-priori-error-power curves over Monte Carlo runs.

    A diverging run is counted per algorithm and excluded from that
    algorithm's averages; the experiment continues.
    """
    n = config.num_iterations
    w_star = config.true_weights
    acc = {
        label: (_KahanAccumulator(n), _KahanAccumulator(n))
        for label, _ in config.algorithms
    }
    divergences = {label: 0 for label, _ in config.algorithms}

    for r in range(config.num_runs):
        X, d, _ = run_data(config, r)
        data = (X, d)
        for label, cfg in config.algorithms:
            try:
                traj = run(FilterState.zeros(config.dim), data, cfg, reference=w_star)
            except DivergenceError:
                divergences[label] += 1
                continue
            wep_acc, ea2_acc = acc[label]
            wep_acc.add(traj.wep)
            ea2_acc.add(traj.ea * traj.ea)

    summaries = []
    window = config.steady_state_window
    for label, cfg in config.algorithms:
        used = config.num_runs - divergences[label]
        wep_acc, ea2_acc = acc[label]
        if used > 0:
            mean_wep = wep_acc.sum / used
            mean_ea_sq = ea2_acc.sum / used
            steady_emse = float(np.mean(mean_ea_sq[n - window:]))
            steady_wep = float(np.mean(mean_wep[n - window:]))
        else:
            mean_wep = np.full(n, np.nan)
            mean_ea_sq = np.full(n, np.nan)
            steady_emse = math.nan
            steady_wep = math.nan
        summaries.append(
            AlgorithmSummary(
                label=label,
                config=cfg,
                mean_wep=mean_wep,
                mean_ea_sq=mean_ea_sq,
                steady_state_emse=steady_emse,
                steady_state_wep=steady_wep,
                divergence_count=divergences[label],
                runs_used=used,
            )
        )
    return IdentificationResult(config=config, summaries=summaries)


@dataclass
class SweepRow:
    mu: float
    s_theory: Optional[float]
    s_simulated: float
    divergence_count: int


def _single_kernel_algorithm(config: ExperimentConfig) -> Tuple[str, AlgorithmConfig]:
    kernel_entries = [
        (label, cfg)
        for label, cfg in config.algorithms
        if cfg.algorithm in (Algorithm.MACC, Algorithm.MCC)
    ]
    if len(kernel_entries) != 1:
        raise ValueError(
            "the step-size sweep needs exactly one kernel algorithm "
            f"(macc or mcc) in the config, found {len(kernel_entries)}"
        )
    return kernel_entries[0]


def _bandwidths_of(cfg: AlgorithmConfig) -> KernelBandwidths:
    if cfg.algorithm is Algorithm.MACC:
        return cfg.macc_bandwidths
    s = float(cfg.mcc_bandwidth)
    return KernelBandwidths(sigma_plus=s, sigma_minus=s)


def emse_sweep(
    config: ExperimentConfig,
    mu_grid: Sequence[float],
    abs_tol: float = 1e-10,
    trace_rx: Optional[float] = None,
) -> List[SweepRow]:
    """Theoretical vs simulated steady-state EMSE across step sizes.

    All step sizes replay the same per-run data (seeds depend only on
    (base_seed, run)), so simulated values are directly comparable.  A
    step size outside the theory's validity regime gets an empty theory
    cell rather than aborting the sweep.
    """
    if not mu_grid:
        raise ValueError("mu_grid must be non-empty")
    label, base_cfg = _single_kernel_algorithm(config)
    bw = _bandwidths_of(base_cfg)
    t_rx = config.trace_rx if trace_rx is None else float(trace_rx)
    e_psi_sq, e_psi_prime, e_combo = macc_expectations(bw, config.noise, abs_tol)

    rows = []
    for mu in mu_grid:
        cfg_mu = dataclasses.replace(base_cfg, step_size=float(mu))
        exp_mu = dataclasses.replace(config, algorithms=((label, cfg_mu),))
        result = run_identification(exp_mu)
        summary = result.summaries[0]
        try:
            pred = emse_from_expectations(
                float(mu), t_rx, e_psi_sq, e_psi_prime, e_combo
            )
            s_theory = pred.S
        except TheoryValidityError:
            s_theory = None
        rows.append(
            SweepRow(
                mu=float(mu),
                s_theory=s_theory,
                s_simulated=summary.steady_state_emse,
                divergence_count=summary.divergence_count,
            )
        )
    return rows


def compare_algorithms(config: ExperimentConfig) -> IdentificationResult:
    """Averaged WEP convergence curves for every configured algorithm."""
    return run_identification(config)


@dataclass
class TheoryRow:
    mu: float
    s_theory: Optional[float]
    e_psi_sq: float
    e_psi_prime: float
    e_combo: float


def theory_table(
    config: ExperimentConfig,
    mu_grid: Sequence[float],
    abs_tol: float = 1e-10,
    trace_rx: Optional[float] = None,
) -> List[TheoryRow]:
    """Steady-state predictions on a step-size grid (no simulation)."""
    if not mu_grid:
        raise ValueError("mu_grid must be non-empty")
    _, base_cfg = _single_kernel_algorithm(config)
    bw = _bandwidths_of(base_cfg)
    t_rx = config.trace_rx if trace_rx is None else float(trace_rx)
    e_psi_sq, e_psi_prime, e_combo = macc_expectations(bw, config.noise, abs_tol)
    rows = []
    for mu in mu_grid:
        try:
            pred = emse_from_expectations(
                float(mu), t_rx, e_psi_sq, e_psi_prime, e_combo
            )
            s_theory = pred.S
        except TheoryValidityError:
            s_theory = None
        rows.append(
            TheoryRow(
                mu=float(mu),
                s_theory=s_theory,
                e_psi_sq=e_psi_sq,
                e_psi_prime=e_psi_prime,
                e_combo=e_combo,
            )
        )
    return rows


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def write_simulate_csv(result: IdentificationResult, path: str) -> None:
    """Columns: iteration, then wep_<label>, easq_<label> per algorithm."""
    config = result.config
    idx = np.arange(0, config.num_iterations, config.decimation)
    header = ["iteration"]
    for s in result.summaries:
        header.append(f"wep_{s.label}")
        header.append(f"easq_{s.label}")
    lines = [",".join(header)]
    for i in idx:
        row = [str(int(i))]
        for s in result.summaries:
            row.append(_fmt(s.mean_wep[i]))
            row.append(_fmt(s.mean_ea_sq[i]))
        lines.append(",".join(row))
    _write_lines(path, lines)


def write_compare_csv(result: IdentificationResult, path: str) -> None:
    """Columns: iteration, then wep_<label> per algorithm."""
    config = result.config
    idx = np.arange(0, config.num_iterations, config.decimation)
    header = ["iteration"] + [f"wep_{s.label}" for s in result.summaries]
    lines = [",".join(header)]
    for i in idx:
        row = [str(int(i))] + [_fmt(s.mean_wep[i]) for s in result.summaries]
        lines.append(",".join(row))
    _write_lines(path, lines)


def write_sweep_csv(rows: List[SweepRow], path: str) -> None:
    """Columns: mu, S_theory, S_simulated (empty theory cell if refused)."""
    lines = ["mu,S_theory,S_simulated"]
    for r in rows:
        lines.append(f"{_fmt(r.mu)},{_fmt(r.s_theory)},{_fmt(r.s_simulated)}")
    _write_lines(path, lines)


def write_theory_csv(rows: List[TheoryRow], path: str) -> None:
    """Columns: mu, S_theory, e_psi_sq, e_psi_prime, e_combo."""
    lines = ["mu,S_theory,e_psi_sq,e_psi_prime,e_combo"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.mu),
                    _fmt(r.s_theory),
                    _fmt(r.e_psi_sq),
                    _fmt(r.e_psi_prime),
                    _fmt(r.e_combo),
                ]
            )
        )
    _write_lines(path, lines)


def _write_lines(path: str, lines: List[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
