"""Acceptance criteria, one test per criterion at its pinned tolerance.

Each test prints a PASS line on success (run with `pytest -s` to see them);
a failed assertion marks the criterion FAIL.
"""

import time

import numpy as np
import pytest

from corrchan import (ChannelMap, NoiseModel, apply_transfer, brute_force_chi2,
                      capacity_curve, chi2_bound, chi2_closed_form, crange,
                      f_of_c, mc_orthogonality, mc_transfer_matrix,
                      random_density, saturation_check, simulate_shots,
                      von_neumann_entropy, werner_state)
from corrchan.cli import main
from corrchan.protocol import TrainProtocolConfig, extended_rate

LOG2_5 = np.log2(5.0)
LOG2_17_4 = np.log2(17.0 / 4.0)
LOG2_3 = np.log2(3.0)
ETA_GRID_11 = np.round(np.linspace(0.0, 1.0, 11), 10)


def report(n, text):
    print(f"criterion {n:>2}: PASS - {text}")


def test_criterion_01_endpoint_capacities():
    start = time.perf_counter()
    ent = capacity_curve("entangled", [1.0])[0][1]
    sep = capacity_curve("separable", [1.0])[0][1]
    base = capacity_curve("baseline", [1.0])[0][1]
    elapsed = time.perf_counter() - start
    assert abs(ent - LOG2_5) <= 1e-9
    assert abs(sep - LOG2_17_4) <= 1e-9
    assert base == 2.0
    assert elapsed < 1.0
    report(1, f"endpoints ({ent:.9f}, {sep:.9f}, {base:.1f}) in {elapsed:.3f}s")


def test_criterion_02_f_function():
    assert abs(f_of_c(0.0) - 2.0) <= 1e-12
    assert abs(f_of_c(-1.0) - 0.0) <= 1e-12
    assert abs(f_of_c(1.0 / 3.0) - LOG2_3) <= 1e-12
    worst = max(abs(f_of_c(float(c)) - von_neumann_entropy(werner_state(float(c))))
                for c in np.linspace(-1.0, 1.0 / 3.0, 100))
    assert worst <= 1e-12
    report(2, f"f spot values exact, grid deviation {worst:.2e} <= 1e-12")


def test_criterion_03_lemma2_vs_blahut_arimoto():
    start = time.perf_counter()
    worst = 0.0
    for mode in ("entangled", "separable"):
        for eta in ETA_GRID_11:
            closed = chi2_bound(crange(mode), float(eta)).chi2
            oracle = brute_force_chi2(crange(mode), float(eta), grid_points=41)
            worst = max(worst, abs(closed - oracle))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-6
    assert elapsed < 10.0
    report(3, f"closed form vs oracle deviation {worst:.2e} <= 1e-6 in {elapsed:.1f}s")


def test_criterion_04_off_by_two_erratum():
    supremum = chi2_bound(crange("entangled"), 1.0).chi2
    assert abs(supremum - 1.0) <= 1e-12
    legacy = chi2_closed_form(crange("entangled"), 1.0) - 2.0
    assert abs(legacy - (-1.0)) <= 1e-12
    assert legacy < 0.0, "negative value violates the chi >= 0 invariant"
    report(4, f"supremum form gives 1.0; -2-offset variant gives {legacy:.1f} (rejected)")


def test_criterion_05_monte_carlo_twirl_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    inputs = [random_density(rng) for _ in range(20)]
    worst = 0.0
    for q in (0.0, 0.5, 1.0):
        transfer = mc_transfer_matrix(q, 100000, seed=11)
        analytic = ChannelMap(NoiseModel.mixture(q))
        for rho in inputs:
            mc = apply_transfer(transfer, rho.matrix)
            mc /= np.trace(mc).real
            worst = max(worst, float(np.abs(mc - analytic(rho).matrix).max()))
    elapsed = time.perf_counter() - start
    assert worst < 5e-3
    assert elapsed < 30.0
    report(5, f"MC/analytic max entry deviation {worst:.2e} < 5e-3 in {elapsed:.1f}s")


def test_criterion_06_schur_orthogonality():
    rng = np.random.default_rng(33)
    cases = (
        ((0.5, 0, 0, 0.5, 0, 0), 0.5),
        ((1.0, 1, 1, 0.5, 0, 0), 0.0),
        ((1.0, 0, 0, 1.0, 1, 1), 0.0),
    )
    devs = []
    for args, expected in cases:
        est = mc_orthogonality(*args, samples=100000, rng=rng)
        devs.append(abs(est.value - expected))
        assert devs[-1] < 5e-3
    report(6, "orthogonality estimates hit {1/2, 0, 0}, deviations "
              + ", ".join(f"{d:.1e}" for d in devs))


def test_criterion_07_measurement_saturation():
    worst_mi = 0.0
    worst_prior = 0.0
    for mode in ("entangled", "separable"):
        for eta in ETA_GRID_11:
            rep = saturation_check(mode, float(eta))
            bound = chi2_bound(crange(mode), float(eta))
            worst_mi = max(worst_mi, abs(rep.mi_max - bound.chi2))
            worst_prior = max(worst_prior,
                              abs(rep.optimal_prior[0] - bound.output_probs[0]))
    assert worst_mi <= 1e-9
    assert worst_prior <= 1e-6
    report(7, f"MI deviation {worst_mi:.2e} <= 1e-9, prior deviation "
              f"{worst_prior:.2e} <= 1e-6")


def test_criterion_08_shot_level_end_to_end():
    start = time.perf_counter()
    res1 = simulate_shots("entangled", NoiseModel.mixture(1.0), 1000000, seed=0)
    res0 = simulate_shots("entangled", NoiseModel.mixture(0.0), 1000000, seed=0)
    elapsed = time.perf_counter() - start
    assert abs(res1.mi - 1.0) < 0.01
    assert abs(res0.mi - 0.0) < 0.01
    assert elapsed < 60.0
    report(8, f"10^6 shots: MI(q=1)={res1.mi:.5f}, MI(q=0)={res0.mi:.2e} "
              f"in {elapsed:.1f}s")


def test_criterion_09_monotonicity():
    grid = np.linspace(0.0, 1.0, 101)
    ent = np.array([t for _, t in capacity_curve("entangled", grid)])
    sep = np.array([t for _, t in capacity_curve("separable", grid)])
    base = np.array([t for _, t in capacity_curve("baseline", grid)])
    slack = min(np.diff(ent).min(), np.diff(sep).min(),
                (ent - sep).min(), (sep - base).min())
    assert slack >= -1e-10
    report(9, f"nondecreasing and ordered on 101 points, min slack {slack:.2e}")


def test_criterion_10_protocol_rate():
    rate = extended_rate(TrainProtocolConfig(0.5, 1.0))
    assert rate == 2.5
    assert rate > LOG2_5
    report(10, f"train rate {rate} = 2.5 exactly, exceeds log2(5) = {LOG2_5:.6f}")


def test_criterion_11_determinism(tmp_path):
    pairs = []
    for name, args in (
        ("verify", ["verify", "--samples", "20000", "--seed", "7", "--shards", "2"]),
        ("simulate", ["simulate", "--eta", "0.5", "--shots", "10000",
                      "--seed", "7", "--shards", "2"]),
    ):
        out_a = tmp_path / f"{name}_a.json"
        out_b = tmp_path / f"{name}_b.json"
        assert main(args + ["--out", str(out_a)]) in (0,)
        assert main(args + ["--out", str(out_b)]) in (0,)
        identical = out_a.read_bytes() == out_b.read_bytes()
        assert identical
        pairs.append(name)
    report(11, f"byte-identical reruns for {', '.join(pairs)}")
