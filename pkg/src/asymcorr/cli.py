"""Command-line entry point.

Subcommands:
  simulate  full identification experiment; per-iteration WEP and a
            priori error power per algorithm
  sweep     theoretical vs simulated steady-state EMSE over a step-size
            grid (sweep.mu_grid)
  compare   per-algorithm WEP convergence curves
  theory    steady-state predictions only, no simulation

Shared flags: --config (required), --seed, --out, --runs, --fast.
All numeric CSV cells use 17 significant digits, so identical config and
seed reproduce output byte for byte.
"""

import argparse
import sys

from . import harness
from ._backend import get_backend
from .configfile import ConfigError, LoadedConfig, load_config_file


def _experiment(loaded: LoadedConfig) -> harness.ExperimentConfig:
    if not loaded.algorithms:
        raise ConfigError(
            "no algorithms configured: set 'algorithms = ...' "
            "or 'sweep.algorithm = ...'"
        )
    return harness.ExperimentConfig(
        true_weights=loaded.true_weights,
        input_variance=loaded.input_variance,
        noise=loaded.noise,
        algorithms=loaded.algorithms,
        num_runs=loaded.num_runs,
        num_iterations=loaded.num_iterations,
        steady_state_window=loaded.steady_state_window,
        base_seed=loaded.base_seed,
        output_path=loaded.output_path,
        decimation=loaded.decimation,
    )


def _require_out(loaded: LoadedConfig, command: str) -> str:
    if loaded.output_path:
        return loaded.output_path
    raise ConfigError(
        f"{command} needs an output path: pass --out or set experiment.output"
    )


def _require_mu_grid(loaded: LoadedConfig, command: str):
    if loaded.mu_grid:
        return loaded.mu_grid
    raise ConfigError(f"{command} needs sweep.mu_grid in the config")


def _cmd_simulate(loaded: LoadedConfig) -> int:
    config = _experiment(loaded)
    out = _require_out(loaded, "simulate")
    result = harness.run_identification(config)
    harness.write_simulate_csv(result, out)
    for s in result.summaries:
        print(
            f"{s.label}: steady-state EMSE {s.steady_state_emse:.6g}, "
            f"steady-state WEP {s.steady_state_wep:.6g}, "
            f"runs used {s.runs_used}/{config.num_runs} "
            f"({s.divergence_count} diverged)"
        )
    print(f"wrote {out}")
    return 0


def _cmd_sweep(loaded: LoadedConfig) -> int:
    config = _experiment(loaded)
    out = _require_out(loaded, "sweep")
    mu_grid = _require_mu_grid(loaded, "sweep")
    rows = harness.emse_sweep(
        config, mu_grid, abs_tol=loaded.theory_abs_tol, trace_rx=loaded.trace_rx
    )
    harness.write_sweep_csv(rows, out)
    for r in rows:
        theory = "n/a" if r.s_theory is None else f"{r.s_theory:.6g}"
        print(
            f"mu={r.mu:g}: S_theory={theory}, S_simulated={r.s_simulated:.6g}"
            + (f", {r.divergence_count} runs diverged" if r.divergence_count else "")
        )
    print(f"wrote {out}")
    return 0


def _cmd_compare(loaded: LoadedConfig) -> int:
    config = _experiment(loaded)
    out = _require_out(loaded, "compare")
    result = harness.compare_algorithms(config)
    harness.write_compare_csv(result, out)
    ranked = sorted(
        result.summaries,
        key=lambda s: (s.steady_state_wep if s.steady_state_wep == s.steady_state_wep else float("inf")),
    )
    for s in ranked:
        print(
            f"{s.label}: steady-state WEP {s.steady_state_wep:.6g} "
            f"({s.divergence_count} of {config.num_runs} runs diverged)"
        )
    print(f"wrote {out}")
    return 0


def _cmd_theory(loaded: LoadedConfig) -> int:
    config = _experiment(loaded)
    out = _require_out(loaded, "theory")
    mu_grid = _require_mu_grid(loaded, "theory")
    rows = harness.theory_table(
        config, mu_grid, abs_tol=loaded.theory_abs_tol, trace_rx=loaded.trace_rx
    )
    harness.write_theory_csv(rows, out)
    for r in rows:
        theory = "outside validity regime" if r.s_theory is None else f"{r.s_theory:.6g}"
        print(f"mu={r.mu:g}: S_theory={theory}")
    print(f"wrote {out}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "theory": _cmd_theory,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymcorr",
        description="Robust adaptive-filter experiments with asymmetric kernel scores.",
    )
    parser.add_argument(
        "--backend-info",
        action="store_true",
        help="print the active filter-loop backend and exit",
    )
    sub = parser.add_subparsers(dest="command")
    for name, help_text in (
        ("simulate", "run the identification experiment and write curve CSV"),
        ("sweep", "theoretical vs simulated EMSE across step sizes"),
        ("compare", "averaged WEP convergence curves per algorithm"),
        ("theory", "steady-state EMSE predictions only"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the config file")
        p.add_argument("--seed", type=int, default=None, help="override experiment.base_seed")
        p.add_argument("--out", default=None, help="override the output CSV path")
        p.add_argument("--runs", type=int, default=None, help="override experiment.num_runs")
        p.add_argument(
            "--fast",
            action="store_true",
            help="cap runs at 20 for a quick check (not a full reproduction)",
        )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend_info:
        print(f"filter-loop backend: {get_backend()}")
        return 0
    if args.command is None:
        parser.print_help()
        return 2
    try:
        loaded = load_config_file(
            args.config,
            seed=args.seed,
            runs=args.runs,
            out=args.out,
            fast=args.fast,
        )
    except FileNotFoundError:
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.fast:
        print(
            "note: --fast caps the run count; results are a quick check, "
            "not a full reproduction",
            file=sys.stderr,
        )
    try:
        return _COMMANDS[args.command](loaded)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
