"""Robust adaptive filtering with asymmetric Gaussian kernel scores.

Online filters whose update strength decays for large errors, with
separate decay scales for positive and negative errors; a batch
fixed-point regression solver under the same criterion; steady-state
error theory; mixture noise models; and a seeded Monte Carlo experiment
harness with a CLI.
"""

from ._backend import get_backend
from .cli import main
from .configfile import (
    ConfigError,
    LoadedConfig,
    load_config,
    load_config_file,
)
from .filters import (
    Algorithm,
    AlgorithmConfig,
    DivergenceError,
    FilterState,
    LmmParams,
    Trajectory,
    run,
    step,
)
from .harness import (
    AlgorithmSummary,
    ExperimentConfig,
    IdentificationResult,
    SweepRow,
    TheoryRow,
    compare_algorithms,
    emse_sweep,
    run_data,
    run_identification,
    theory_table,
    write_compare_csv,
    write_simulate_csv,
    write_sweep_csv,
    write_theory_csv,
)
from .kernels import (
    KernelBandwidths,
    eval_kernel,
    eval_score,
    eval_score_double_prime,
    eval_score_prime,
    eval_weight_xi,
)
from .noise import Gaussian, NoiseModel, ShiftedF, SplitGaussian
from .regression import (
    FixedPointResult,
    IllConditionedError,
    NonConvergenceError,
    RegressionProblem,
    gradient,
    objective,
    solve_fixed_point,
)
from .theory import (
    EmsePrediction,
    QuadratureError,
    TheoryValidityError,
    emse_from_expectations,
    expect,
    macc_expectations,
    predict_emse,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AlgorithmConfig",
    "AlgorithmSummary",
    "ConfigError",
    "DivergenceError",
    "EmsePrediction",
    "ExperimentConfig",
    "FilterState",
    "FixedPointResult",
    "Gaussian",
    "IdentificationResult",
    "IllConditionedError",
    "KernelBandwidths",
    "LmmParams",
    "LoadedConfig",
    "NoiseModel",
    "NonConvergenceError",
    "QuadratureError",
    "RegressionProblem",
    "ShiftedF",
    "SplitGaussian",
    "SweepRow",
    "TheoryRow",
    "TheoryValidityError",
    "Trajectory",
    "compare_algorithms",
    "emse_from_expectations",
    "emse_sweep",
    "eval_kernel",
    "eval_score",
    "eval_score_double_prime",
    "eval_score_prime",
    "eval_weight_xi",
    "expect",
    "get_backend",
    "gradient",
    "load_config",
    "load_config_file",
    "macc_expectations",
    "main",
    "objective",
    "predict_emse",
    "run",
    "run_data",
    "run_identification",
    "solve_fixed_point",
    "step",
    "theory_table",
    "write_compare_csv",
    "write_simulate_csv",
    "write_sweep_csv",
    "write_theory_csv",
    "__version__",
]
