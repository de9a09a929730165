"""Smoke tests for the python bindings and the command line tool."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

import blockshrink as bs

CLI = os.environ.get("BLOCKSHRINK_CLI")


def test_transform_round_trip():
    rng = np.random.default_rng(7)
    x = rng.normal(size=256)
    tree = bs.analyze(x)
    back = bs.synthesize(tree)
    assert np.max(np.abs(back - x)) < 1e-10
    assert tree.energy() == pytest.approx(float(np.sum(x * x)), rel=1e-12)


def test_sine_coefficients():
    tree = bs.true_coefficients(bs.Sine(), 8)
    assert tree.level(0)[0] == pytest.approx(2.0 * math.sqrt(2.0) / math.pi, rel=1e-12)
    assert abs(tree.level(-1)[0]) < 1e-14


def test_simulation_determinism():
    truth = bs.true_coefficients(bs.Sine(), 10)
    a = bs.simulate(truth, 1024, 0.1, bs.SeedSpec(5, 3))
    b = bs.simulate(truth, 1024, 0.1, bs.SeedSpec(5, 3))
    for j in range(-1, 11):
        assert np.array_equal(a.y.level(j), b.y.level(j))


def test_truncation_invariant():
    truth = bs.true_coefficients(bs.Sine(), 10)
    obs = bs.simulate(truth, 1024, 0.1, bs.SeedSpec(1, 0))
    result = bs.truncated_block_threshold(obs, bs.EstimatorConfig())
    for j in range(-1, 11):
        t = result.diagnostics(j).t
        if math.isinf(t):
            continue
        assert np.all(np.abs(result.coefficients.level(j)) <= t)


def test_level_statistic_matches_bruteforce():
    rng = np.random.default_rng(0)
    for _ in range(50):
        values = rng.normal(size=rng.integers(1, 40))
        thr = float(rng.uniform(0.2, 3.0))
        assert bs.compute_L(values, 1024, thr) == bs.compute_L_bruteforce(values, 1024, thr)


def test_monte_carlo_runs():
    out = bs.monte_carlo(bs.Sine(), 256, 0.1, [3.0, 7.0], reps=25, master_seed=9)
    assert len(out) == 2
    assert out[0].l2_mean > 0
    assert out[1].linf_mean > 0


def _run_cli(*args):
    assert CLI, "BLOCKSHRINK_CLI not set"
    return subprocess.run([CLI, *args], capture_output=True, text=True)


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
def test_cli_gamma_sweep_deterministic(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["gamma-sweep", "--n", "256", "--sigma", "0.1", "--reps", "15", "--seed", "4"]
    assert _run_cli(*args, "--out", str(out1)).returncode == 0
    assert _run_cli(*args, "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = out1.read_text().splitlines()[0]
    assert header == "gamma,n,sigma,reps,l2_rmse,l2_se,linf_mean,linf_se"


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
def test_cli_default_gamma_grid_has_25_rows(tmp_path):
    out = tmp_path / "grid.csv"
    res = _run_cli("gamma-sweep", "--n", "1024", "--sigma", "0.1", "--reps", "5",
                   "--out", str(out))
    assert res.returncode == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 26  # header + gamma = 3.0, 3.5, ..., 15.0
    assert rows[1].startswith("3,") and rows[-1].startswith("15,")


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
def test_cli_lj_dist_probabilities_sum_to_one(tmp_path):
    out = tmp_path / "lj.csv"
    res = _run_cli("lj-dist", "--n", "1024", "--sigma", "0.1", "--reps", "200",
                   "--seed", "8", "--out", str(out))
    assert res.returncode == 0
    totals = {}
    values = set()
    for line in out.read_text().splitlines()[1:]:
        level, value, prob = line.split(",")
        totals[level] = totals.get(level, 0.0) + float(prob)
        values.add(value)
    assert len(totals) == 12  # levels -1..10
    for total in totals.values():
        assert total == pytest.approx(1.0, abs=1e-12)
    assert values == {str(v) for v in range(1, 8)} | {"inf"}


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
def test_cli_manifest_rerun(tmp_path):
    out = tmp_path / "sweep.csv"
    res = _run_cli("gamma-sweep", "--n", "256", "--reps", "10", "--seed", "11",
                   "--gamma-min", "5", "--gamma-max", "8", "--gamma-step", "1",
                   "--out", str(out))
    assert res.returncode == 0
    replay = tmp_path / "replay.csv"
    res = _run_cli("rerun", "--manifest", str(out) + ".manifest", "--out", str(replay))
    assert res.returncode == 0
    assert out.read_bytes() == replay.read_bytes()


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
def test_cli_denoise_beats_raw_noise(tmp_path):
    n = 512
    clean = np.sqrt(2.0) * np.sin(2.0 * np.pi * (np.arange(n) + 0.5) / n)
    for seed in range(5):
        rng = np.random.default_rng(seed)
        noisy = clean + 0.08 * rng.normal(size=n)
        signal = tmp_path / f"signal{seed}.txt"
        signal.write_text("".join(f"{float(v)!r}\n" for v in noisy))
        out = tmp_path / f"denoised{seed}.txt"
        diag = tmp_path / f"diag{seed}.csv"
        res = _run_cli("denoise", "--in", str(signal), "--sigma", "0.08",
                       "--out", str(out), "--diag", str(diag))
        assert res.returncode == 0
        denoised = np.array([float(line) for line in out.read_text().splitlines()])
        assert denoised.shape == (n,)
        # shrinkage should beat the raw noise sup
        assert np.max(np.abs(denoised - clean)) < np.max(np.abs(noisy - clean))
        assert diag.read_text().splitlines()[0] == "level,L,t,clamped,zeroed"


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
def test_cli_error_codes(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1.0\n2.0\n3.0\n")  # not a power of two
    assert _run_cli("denoise", "--in", str(bad)).returncode == 3
    assert _run_cli("gamma-sweep").returncode == 2  # missing --n
    assert _run_cli("gamma-sweep", "--n", "1000", "--out", str(tmp_path / "x.csv")).returncode == 3
