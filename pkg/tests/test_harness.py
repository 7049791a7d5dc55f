"""Experiment harness: seeding, averaging, error identities, CSV output."""

import math

import numpy as np
import pytest

from asymcorr import (
    Algorithm,
    AlgorithmConfig,
    ExperimentConfig,
    FilterState,
    Gaussian,
    KernelBandwidths,
    NoiseModel,
    compare_algorithms,
    emse_sweep,
    run,
    run_data,
    run_identification,
    theory_table,
    write_compare_csv,
    write_simulate_csv,
    write_sweep_csv,
    write_theory_csv,
)

W_STAR = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.4, 0.3, 0.2, 0.1])


def iv_mixture(outlier_var=10_000.0):
    return NoiseModel(0.1, Gaussian(0.0, 1.0), Gaussian(0.0, outlier_var))


def macc_entry(mu=0.01, sp=0.5, sn=2.0, label="macc"):
    return (
        label,
        AlgorithmConfig(
            algorithm=Algorithm.MACC,
            step_size=mu,
            macc_bandwidths=KernelBandwidths(sp, sn),
        ),
    )


def small_config(**overrides):
    base = dict(
        true_weights=W_STAR,
        input_variance=1.0,
        noise=iv_mixture(),
        algorithms=(macc_entry(),),
        num_runs=3,
        num_iterations=400,
        steady_state_window=100,
        base_seed=7,
        decimation=10,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------- config

def test_config_validation():
    with pytest.raises(ValueError):
        small_config(num_runs=0)
    with pytest.raises(ValueError):
        small_config(steady_state_window=401)
    with pytest.raises(ValueError):
        small_config(algorithms=())
    with pytest.raises(ValueError):
        small_config(algorithms=(macc_entry(), macc_entry()))  # duplicate label
    with pytest.raises(ValueError):
        small_config(input_variance=0.0)
    with pytest.raises(TypeError):
        small_config(noise="mixture")
    with pytest.raises(ValueError):
        small_config(decimation=0)


def test_trace_rx_property():
    cfg = small_config()
    assert cfg.dim == 9
    assert cfg.trace_rx == 9.0
    assert small_config(input_variance=2.0).trace_rx == 18.0


# ---------------------------------------------------------------- run data

def test_run_data_reproducible_and_independent():
    cfg = small_config()
    X1, d1, v1 = run_data(cfg, 2)
    X2, d2, v2 = run_data(cfg, 2)
    assert np.array_equal(X1, X2) and np.array_equal(d1, d2) and np.array_equal(v1, v2)
    # regenerating a run never depends on which runs were drawn before it
    X3, _, _ = run_data(cfg, 0)
    assert not np.array_equal(X1, X3)
    assert X1.shape == (400, 9)
    assert np.array_equal(d1, X1 @ cfg.true_weights + v1)


def test_error_decomposition_identity():
    # e(i) = ea(i) + v(i): measured error is a-priori error plus noise
    cfg = small_config(num_iterations=2000)
    X, d, v = run_data(cfg, 0)
    _, algo = cfg.algorithms[0]
    traj = run(FilterState.zeros(cfg.dim), (X, d), algo, reference=cfg.true_weights)
    # d uses a BLAS dot, the loop a sequential dot, so this holds to
    # rounding, not bitwise
    np.testing.assert_allclose(traj.e, traj.ea + v, atol=1e-9)


# ---------------------------------------------------------------- averaging

def test_mean_curves_match_manual_average():
    cfg = small_config(num_runs=4)
    result = run_identification(cfg)
    s = result.summaries[0]
    assert s.runs_used == 4 and s.divergence_count == 0

    label, algo = cfg.algorithms[0]
    weps = []
    ea2s = []
    for r in [3, 1, 0, 2]:  # order must not matter
        X, d, _ = run_data(cfg, r)
        traj = run(FilterState.zeros(cfg.dim), (X, d), algo, reference=cfg.true_weights)
        weps.append(traj.wep)
        ea2s.append(traj.ea * traj.ea)
    np.testing.assert_allclose(s.mean_wep, np.mean(weps, axis=0), rtol=1e-12)
    np.testing.assert_allclose(s.mean_ea_sq, np.mean(ea2s, axis=0), rtol=1e-12)

    # steady-state numbers are window means of the mean curves
    w = cfg.steady_state_window
    assert s.steady_state_wep == pytest.approx(float(np.mean(s.mean_wep[-w:])), rel=1e-15)
    assert s.steady_state_emse == pytest.approx(float(np.mean(s.mean_ea_sq[-w:])), rel=1e-15)


def test_identical_configs_give_identical_curves():
    # same algorithm under two labels: common random numbers make the
    # averaged curves bit-identical
    lms = AlgorithmConfig(algorithm=Algorithm.LMS, step_size=0.002)
    cfg = small_config(algorithms=(("a", lms), ("b", lms)))
    result = run_identification(cfg)
    a, b = result.summaries
    assert np.array_equal(a.mean_wep, b.mean_wep)
    assert np.array_equal(a.mean_ea_sq, b.mean_ea_sq)


def test_run_identification_deterministic():
    cfg = small_config()
    r1 = run_identification(cfg)
    r2 = run_identification(cfg)
    assert np.array_equal(r1.summaries[0].mean_wep, r2.summaries[0].mean_wep)


def test_convergence_toward_true_weights():
    cfg = small_config(num_runs=5, num_iterations=4000, steady_state_window=500)
    result = run_identification(cfg)
    s = result.summaries[0]
    # starts at ||W*||^2, ends well below it
    assert s.mean_wep[0] == pytest.approx(float(W_STAR @ W_STAR), rel=1e-12)
    assert s.steady_state_wep < 0.1 * float(W_STAR @ W_STAR)


def test_low_noise_floor_tracks_noise_variance():
    quiet = small_config(
        noise=NoiseModel(0.0, Gaussian(0.0, 1e-8), Gaussian(0.0, 1.0)),
        num_runs=2,
        num_iterations=3000,
        steady_state_window=300,
    )
    loud = small_config(
        noise=NoiseModel(0.0, Gaussian(0.0, 1.0), Gaussian(0.0, 1.0)),
        num_runs=2,
        num_iterations=3000,
        steady_state_window=300,
    )
    s_quiet = run_identification(quiet).summaries[0]
    s_loud = run_identification(loud).summaries[0]
    assert s_quiet.steady_state_wep < 1e-6 * s_loud.steady_state_wep


def test_divergence_counted_and_excluded():
    # huge LMS step on heavy-tailed noise diverges on every run
    bad = ("lms", AlgorithmConfig(algorithm=Algorithm.LMS, step_size=100.0))
    cfg = small_config(algorithms=(macc_entry(), bad), num_runs=3)
    result = run_identification(cfg)
    good = result.summary("macc")
    lms = result.summary("lms")
    assert good.divergence_count == 0 and good.runs_used == 3
    assert lms.divergence_count == 3 and lms.runs_used == 0
    assert math.isnan(lms.steady_state_wep)
    assert np.all(np.isnan(lms.mean_wep))
    assert np.all(np.isfinite(good.mean_wep))


def test_summary_lookup():
    result = run_identification(small_config())
    assert result.summary("macc").label == "macc"
    with pytest.raises(KeyError):
        result.summary("nope")


# ---------------------------------------------------------------- sweep

def test_emse_sweep_rows():
    cfg = small_config(num_runs=2, num_iterations=1500, steady_state_window=200)
    grid = [0.002, 0.01, 0.05]
    rows = emse_sweep(cfg, grid, abs_tol=1e-8)
    assert [r.mu for r in rows] == grid
    for r in rows:
        assert r.s_simulated > 0.0
        assert r.s_theory is not None and r.s_theory > 0.0
        assert r.divergence_count == 0
    # theory is monotone in mu here
    assert rows[0].s_theory < rows[1].s_theory < rows[2].s_theory


def test_emse_sweep_requires_single_kernel_algorithm():
    lms = ("lms", AlgorithmConfig(algorithm=Algorithm.LMS, step_size=0.002))
    cfg = small_config(algorithms=(lms,))
    with pytest.raises(ValueError):
        emse_sweep(cfg, [0.01])
    two = small_config(
        algorithms=(macc_entry(label="m1"), macc_entry(label="m2"))
    )
    with pytest.raises(ValueError):
        emse_sweep(two, [0.01])
    with pytest.raises(ValueError):
        emse_sweep(small_config(), [])


def test_theory_table_matches_sweep_theory():
    cfg = small_config()
    grid = [0.002, 0.028]
    t_rows = theory_table(cfg, grid, abs_tol=1e-8)
    s_rows = emse_sweep(
        small_config(num_runs=1, num_iterations=100, steady_state_window=10),
        grid,
        abs_tol=1e-8,
    )
    for t, s in zip(t_rows, s_rows):
        assert t.s_theory == s.s_theory
    # expectation columns are mu-independent
    assert t_rows[0].e_psi_sq == t_rows[1].e_psi_sq
    assert t_rows[0].e_psi_prime == t_rows[1].e_psi_prime


# ---------------------------------------------------------------- CSV

def test_simulate_csv_layout(tmp_path):
    cfg = small_config(num_runs=2, num_iterations=100, steady_state_window=10,
                       decimation=25)
    result = run_identification(cfg)
    path = tmp_path / "sim.csv"
    write_simulate_csv(result, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "iteration,wep_macc,easq_macc"
    assert len(lines) == 1 + 4  # iterations 0, 25, 50, 75
    first = lines[1].split(",")
    assert first[0] == "0"
    # 17-significant-digit cells round-trip to the exact double
    assert float(first[1]) == result.summaries[0].mean_wep[0]
    assert float(first[2]) == result.summaries[0].mean_ea_sq[0]


def test_compare_csv_layout(tmp_path):
    lms = ("lms", AlgorithmConfig(algorithm=Algorithm.LMS, step_size=0.002))
    cfg = small_config(algorithms=(macc_entry(), lms), num_runs=2,
                       num_iterations=60, steady_state_window=10, decimation=20)
    result = compare_algorithms(cfg)
    path = tmp_path / "cmp.csv"
    write_compare_csv(result, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "iteration,wep_macc,wep_lms"
    assert [row.split(",")[0] for row in lines[1:]] == ["0", "20", "40"]


def test_sweep_csv_layout(tmp_path):
    cfg = small_config(num_runs=1, num_iterations=200, steady_state_window=20)
    rows = emse_sweep(cfg, [0.002, 0.01], abs_tol=1e-8)
    path = tmp_path / "sweep.csv"
    write_sweep_csv(rows, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "mu,S_theory,S_simulated"
    assert len(lines) == 3
    cells = lines[1].split(",")
    assert float(cells[0]) == 0.002
    assert float(cells[1]) == rows[0].s_theory
    assert float(cells[2]) == rows[0].s_simulated


def test_theory_csv_blank_cell_for_invalid(tmp_path):
    from asymcorr.harness import TheoryRow

    rows = [
        TheoryRow(mu=0.01, s_theory=0.5, e_psi_sq=1.0, e_psi_prime=2.0, e_combo=3.0),
        TheoryRow(mu=9.0, s_theory=None, e_psi_sq=1.0, e_psi_prime=2.0, e_combo=3.0),
    ]
    path = tmp_path / "theory.csv"
    write_theory_csv(rows, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "mu,S_theory,e_psi_sq,e_psi_prime,e_combo"
    assert lines[2].split(",")[1] == ""  # refused prediction leaves the cell empty
