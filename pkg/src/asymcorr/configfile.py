"""Plain-text experiment configuration: one `key = value` per line.

Keys use dotted section prefixes (noise.c, macc.sigma_plus, ...).  Lines
starting with `#` and blank lines are ignored.  Unknown or duplicate keys
are errors, as are keys left over after the experiment is assembled, so a
typo never silently falls back to a default.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .filters import Algorithm, AlgorithmConfig, LmmParams
from .kernels import KernelBandwidths
from .noise import Gaussian, NoiseModel, ShiftedF, SplitGaussian


class ConfigError(ValueError):
    """Malformed configuration text or invalid key/value combination."""


DEFAULT_TRUE_WEIGHTS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.4, 0.3, 0.2, 0.1)

_ALGO_LABELS = ("macc", "mcc", "lms", "sa", "lmm", "llad")


def parse_config_text(text: str) -> Dict[str, str]:
    """Raw key -> value mapping; rejects malformed lines and duplicates."""
    out: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


class _Raw:
    """Typed, consume-once access to the raw mapping."""

    def __init__(self, mapping: Dict[str, str]):
        self._map = dict(mapping)

    def _take(self, key):
        return self._map.pop(key, None)

    def has(self, key) -> bool:
        return key in self._map

    def string(self, key, default=None):
        v = self._take(key)
        return default if v is None else v

    def floating(self, key, default=None):
        v = self._take(key)
        if v is None:
            return default
        try:
            x = float(v)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {v!r}") from None
        if not math.isfinite(x):
            raise ConfigError(f"{key}: value must be finite, got {v!r}")
        return x

    def integer(self, key, default=None):
        v = self._take(key)
        if v is None:
            return default
        try:
            return int(v)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {v!r}") from None

    def float_list(self, key, default=None):
        v = self._take(key)
        if v is None:
            return default
        parts = [p.strip() for p in v.split(",") if p.strip()]
        if not parts:
            raise ConfigError(f"{key}: expected a comma-separated number list")
        try:
            return [float(p) for p in parts]
        except ValueError:
            raise ConfigError(f"{key}: expected numbers, got {v!r}") from None

    def string_list(self, key, default=None):
        v = self._take(key)
        if v is None:
            return default
        parts = [p.strip().lower() for p in v.split(",") if p.strip()]
        if not parts:
            raise ConfigError(f"{key}: expected a comma-separated list")
        return parts

    def reject_leftovers(self):
        if self._map:
            names = ", ".join(sorted(self._map))
            raise ConfigError(f"unknown configuration key(s): {names}")


def _component(raw: _Raw, prefix: str):
    kind = raw.string(prefix)
    if kind is None:
        raise ConfigError(f"missing required key {prefix!r} (component kind)")
    kind = kind.strip().lower()
    if kind == "gaussian":
        mean = raw.floating(f"{prefix}.mean", 0.0)
        variance = raw.floating(f"{prefix}.variance")
        if variance is None:
            raise ConfigError(f"missing required key {prefix}.variance")
        return Gaussian(mean=mean, variance=variance)
    if kind == "split_gaussian":
        var_neg = raw.floating(f"{prefix}.var_neg")
        var_pos = raw.floating(f"{prefix}.var_pos")
        if var_neg is None or var_pos is None:
            raise ConfigError(
                f"split_gaussian needs {prefix}.var_neg and {prefix}.var_pos"
            )
        return SplitGaussian(var_neg=var_neg, var_pos=var_pos)
    if kind == "shifted_f":
        d1 = raw.integer(f"{prefix}.d1")
        d2 = raw.integer(f"{prefix}.d2")
        if d1 is None or d2 is None:
            raise ConfigError(f"shifted_f needs {prefix}.d1 and {prefix}.d2")
        return ShiftedF(d1=d1, d2=d2)
    raise ConfigError(
        f"{prefix}: unknown component kind {kind!r} "
        "(expected gaussian, split_gaussian, or shifted_f)"
    )


def _noise_model(raw: _Raw) -> NoiseModel:
    c = raw.floating("noise.c")
    if c is None:
        raise ConfigError("missing required key 'noise.c'")
    main = _component(raw, "noise.main")
    outlier = _component(raw, "noise.outlier")
    try:
        return NoiseModel(occurrence_prob=c, main=main, outlier=outlier)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def _algorithm(raw: _Raw, label: str) -> AlgorithmConfig:
    mu = raw.floating(f"{label}.step_size")
    if mu is None:
        raise ConfigError(f"missing required key '{label}.step_size'")
    try:
        if label == "macc":
            sp = raw.floating("macc.sigma_plus")
            sn = raw.floating("macc.sigma_minus")
            if sp is None or sn is None:
                raise ConfigError(
                    "macc needs macc.sigma_plus and macc.sigma_minus"
                )
            return AlgorithmConfig(
                algorithm=Algorithm.MACC,
                step_size=mu,
                macc_bandwidths=KernelBandwidths(sigma_plus=sp, sigma_minus=sn),
            )
        if label == "mcc":
            sigma = raw.floating("mcc.sigma")
            if sigma is None:
                raise ConfigError("mcc needs mcc.sigma")
            return AlgorithmConfig(
                algorithm=Algorithm.MCC, step_size=mu, mcc_bandwidth=sigma
            )
        if label == "lms":
            return AlgorithmConfig(algorithm=Algorithm.LMS, step_size=mu)
        if label == "sa":
            return AlgorithmConfig(algorithm=Algorithm.SA, step_size=mu)
        if label == "lmm":
            xi = raw.floating("lmm.xi")
            d1 = raw.floating("lmm.delta1")
            d2 = raw.floating("lmm.delta2")
            if xi is None or d1 is None or d2 is None:
                raise ConfigError("lmm needs lmm.xi, lmm.delta1, lmm.delta2")
            return AlgorithmConfig(
                algorithm=Algorithm.LMM,
                step_size=mu,
                lmm_params=LmmParams(xi=xi, delta1=d1, delta2=d2),
            )
        if label == "llad":
            alpha = raw.floating("llad.alpha")
            if alpha is None:
                raise ConfigError("llad needs llad.alpha")
            return AlgorithmConfig(
                algorithm=Algorithm.LLAD, step_size=mu, llad_alpha=alpha
            )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{label}: {exc}") from None
    raise ConfigError(
        f"unknown algorithm {label!r} (expected one of {', '.join(_ALGO_LABELS)})"
    )


@dataclass(frozen=True)
class LoadedConfig:
    """Everything a subcommand needs, assembled from one config file."""

    true_weights: np.ndarray
    input_variance: float
    noise: NoiseModel
    algorithms: Tuple[Tuple[str, AlgorithmConfig], ...]
    num_runs: int
    num_iterations: int
    steady_state_window: int
    base_seed: int
    decimation: int
    output_path: Optional[str]
    mu_grid: Optional[List[float]]
    sweep_algorithm: Optional[str]
    theory_abs_tol: float
    trace_rx: Optional[float]


def load_config(
    text: str,
    seed: Optional[int] = None,
    runs: Optional[int] = None,
    out: Optional[str] = None,
    fast: bool = False,
) -> LoadedConfig:
    """Parse and assemble a config, applying command-line overrides.

    `fast` caps the run count at 20 for quick, non-reproduction checks.
    """
    raw = _Raw(parse_config_text(text))

    weights = raw.float_list("experiment.true_weights", list(DEFAULT_TRUE_WEIGHTS))
    input_variance = raw.floating("experiment.input_variance", 1.0)
    num_runs = raw.integer("experiment.num_runs", 100)
    num_iterations = raw.integer("experiment.num_iterations", 40000)
    window = raw.integer("experiment.steady_state_window", 500)
    base_seed = raw.integer("experiment.base_seed", 0)
    decimation = raw.integer("experiment.decimation", 10)
    output_path = raw.string("experiment.output")

    noise = _noise_model(raw)

    labels = raw.string_list("algorithms")
    algorithms: Tuple[Tuple[str, AlgorithmConfig], ...] = ()
    if labels is not None:
        seen = set()
        pairs = []
        for label in labels:
            if label not in _ALGO_LABELS:
                raise ConfigError(
                    f"algorithms: unknown entry {label!r} "
                    f"(expected subset of {', '.join(_ALGO_LABELS)})"
                )
            if label in seen:
                raise ConfigError(f"algorithms: duplicate entry {label!r}")
            seen.add(label)
            pairs.append((label, _algorithm(raw, label)))
        algorithms = tuple(pairs)

    mu_grid = raw.float_list("sweep.mu_grid")
    sweep_algorithm = raw.string("sweep.algorithm")
    if sweep_algorithm is not None:
        sweep_algorithm = sweep_algorithm.strip().lower()
        if sweep_algorithm not in ("macc", "mcc"):
            raise ConfigError(
                "sweep.algorithm must be macc or mcc, got "
                f"{sweep_algorithm!r}"
            )
        if sweep_algorithm not in {label for label, _ in algorithms}:
            algorithms = algorithms + ((sweep_algorithm, _algorithm(raw, sweep_algorithm)),)

    theory_abs_tol = raw.floating("theory.abs_tol", 1e-10)
    trace_rx = raw.floating("theory.trace_rx")

    raw.reject_leftovers()

    if seed is not None:
        base_seed = int(seed)
    if runs is not None:
        num_runs = int(runs)
    if fast:
        num_runs = min(num_runs, 20)
    if out is not None:
        output_path = out

    if num_runs < 1:
        raise ConfigError(f"num_runs must be positive, got {num_runs}")
    if num_iterations < 1:
        raise ConfigError(f"num_iterations must be positive, got {num_iterations}")
    if not (1 <= window <= num_iterations):
        raise ConfigError(
            f"steady_state_window must lie in [1, num_iterations], got {window}"
        )
    if decimation < 1:
        raise ConfigError(f"decimation must be positive, got {decimation}")
    if input_variance is None or input_variance <= 0.0:
        raise ConfigError(f"input_variance must be positive, got {input_variance}")
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 1 or not np.all(np.isfinite(w)):
        raise ConfigError("experiment.true_weights must be a finite vector")
    if mu_grid is not None:
        if any(not (m > 0.0 and math.isfinite(m)) for m in mu_grid):
            raise ConfigError("sweep.mu_grid entries must be positive and finite")
        if sorted(mu_grid) != mu_grid:
            raise ConfigError("sweep.mu_grid must be sorted ascending")
    if theory_abs_tol <= 0.0:
        raise ConfigError(f"theory.abs_tol must be positive, got {theory_abs_tol}")
    if trace_rx is not None and trace_rx <= 0.0:
        raise ConfigError(f"theory.trace_rx must be positive, got {trace_rx}")

    return LoadedConfig(
        true_weights=w,
        input_variance=float(input_variance),
        noise=noise,
        algorithms=algorithms,
        num_runs=int(num_runs),
        num_iterations=int(num_iterations),
        steady_state_window=int(window),
        base_seed=int(base_seed),
        decimation=int(decimation),
        output_path=output_path,
        mu_grid=mu_grid,
        sweep_algorithm=sweep_algorithm,
        theory_abs_tol=float(theory_abs_tol),
        trace_rx=trace_rx,
    )


def load_config_file(path, **overrides) -> LoadedConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return load_config(fh.read(), **overrides)
