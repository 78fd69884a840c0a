"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s``. The heavy fixtures are
session-scoped; expect roughly 15 minutes on two cores.
"""

import json
import re
import time
from itertools import combinations

import numpy as np
import pytest

from redte.cli import cli
from redte.discrete import FinitePmf, fair_bit_triple, specific_info_redundancy, mss_redundancy, pairwise_min_mi
from redte.estimator import EmbeddingSpec, te_matrix, transfer_entropy
from redte.gauss import (
    REDERIVED,
    ClosedFormParams,
    exact_te_linear,
    closed_form_min_term,
    region_label,
    te_phi_to_x,
    te_phi_to_z,
    te_x_to_z,
    gain_region_bounds,
)
from redte.linsim import LagCouplingSpec, LinSysParams, simulate_benchmark, simulate_lag_network
from redte.selection import SelectionConfig, analyze_target, min_fraction_subset, run_pipeline

from test_discrete import brute_i_min, random_joint

PSI, PHI, X, Y, Z = range(5)
NAMES = ("psi", "phi", "X", "Y", "Z")

REFERENCE_TE = {
    (PHI, X): 0.09,
    (PHI, Y): 0.09,
    (X, Z): 0.06,
    (Y, Z): 0.06,
    (PHI, Z): 0.04,
    (PSI, Z): 0.03,
}


def report(number, ok, detail):
    print(f"[criterion {number}] {'PASS' if ok else 'FAIL'} - {detail}")


def benchmark_params(length, seed):
    return LinSysParams(a=1 / 3, b=1 / 5, c=1 / 2, d=1 / 3, e=1 / 3, length=length, seed=seed)


@pytest.fixture(scope="session")
def reference_matrices():
    """Ten-seed 5x5 raw TE matrices for the benchmark example (L=5, k=10)."""
    start = time.perf_counter()
    mats = []
    for seed in range(10):
        panel = simulate_benchmark(benchmark_params(5000, seed))
        spec = EmbeddingSpec(max_lag=5, horizon=1, k_neighbors=10, seed=seed)
        mats.append(te_matrix(panel, range(5), range(5), spec))
    return mats, time.perf_counter() - start


def test_criterion_1_benchmark_reproduction(reference_matrices):
    mats, elapsed = reference_matrices
    raw = np.array([m.raw_values for m in mats])
    mean = np.full((5, 5), np.nan)
    for i in range(5):
        for j in range(5):
            if i != j:
                mean[i, j] = raw[:, i, j].mean()

    failures = []
    zero_pairs = [
        (i, j) for i in range(5) for j in range(5)
        if i != j and (i, j) not in REFERENCE_TE
    ]
    worst_zero = max(abs(mean[i, j]) for i, j in zero_pairs)
    if worst_zero > 0.02:
        failures.append(f"structural zero at {worst_zero:.4f} > 0.02")
    for (i, j), want in REFERENCE_TE.items():
        diff = abs(mean[i, j] - want)
        if diff > 0.03:
            failures.append(f"{NAMES[i]}->{NAMES[j]} mean {mean[i, j]:.4f} vs {want} (|diff| {diff:.4f} > 0.03)")
    order_hits = sum(
        1 for s in range(10)
        if raw[s, PHI, X] > raw[s, X, Z] > raw[s, PHI, Z] > raw[s, PSI, Z] > 0
    )
    if order_hits < 8:
        failures.append(f"ordering held in only {order_hits}/10 seeds")
    if elapsed > 300:
        failures.append(f"runtime {elapsed:.0f}s > 300s")

    detail = (
        f"zeros<=0.02 (worst {worst_zero:.4f}), ordering {order_hits}/10, "
        f"{elapsed:.0f}s; " + ("; ".join(failures) if failures else "all coupled entries in +-0.03")
    )
    report(1, not failures, detail)
    assert not failures, detail


def test_benchmark_example_pipeline_recovery(reference_matrices):
    """Worked benchmark example: the hidden driver and its two relays are
    recovered from the estimated matrices and the bound sits near the
    reference value."""
    mats, _ = reference_matrices
    cfg = SelectionConfig()
    hits = 0
    bounds = []
    for m in mats:
        col = [max(m.raw(s, Z), 0.0) for s in (PSI, PHI, X, Y)]
        rep = analyze_target(Z, [PSI, PHI, X, Y], col, m, cfg)
        if rep.hidden == PHI and sorted(rep.relevant) == [X, Y]:
            hits += 1
        bounds.append(rep.bound)
    mean_bound = float(np.mean(bounds))
    ok = hits >= 8 and abs(mean_bound - 0.04) <= 0.03
    print(
        f"[benchmark example pipeline] {'PASS' if ok else 'FAIL'} - hidden/relevant recovered "
        f"{hits}/10, mean bound {mean_bound:.4f} (target 0.04 +-0.03)"
    )
    assert ok


def test_criterion_2_closed_form_vs_oracle():
    grid = [0.25, 0.5, 1.0, 2.0]
    sigmas = [0.5, 1.0, 4.0, 9.0]
    start = time.perf_counter()
    worst_8 = worst_9 = 0.0
    printed_wins, rederived_wins, both, neither = 0, 0, 0, 0
    for c in grid:
        for d in grid:
            for e in grid:
                for s2 in sigmas:
                    params = LinSysParams(
                        a=0.0, b=0.0, c=c, d=d, e=e, length=10,
                        noise_std={"phi": float(np.sqrt(s2))},
                    )
                    worst_8 = max(worst_8, abs(
                        exact_te_linear(params, PHI, X, 4) - te_phi_to_x(ClosedFormParams(c, d, e, s2))
                    ))
                    worst_9 = max(worst_9, abs(
                        exact_te_linear(params, PHI, Z, 4) - te_phi_to_z(ClosedFormParams(c, d, e, s2))
                    ))
                    oracle = exact_te_linear(params, X, Z, 4)
                    p_ok = abs(te_x_to_z(ClosedFormParams(c, d, e, s2, variant="printed")) - oracle) <= 1e-9
                    r_ok = abs(te_x_to_z(ClosedFormParams(c, d, e, s2, variant=REDERIVED)) - oracle) <= 1e-9
                    if d != 1.0:
                        if p_ok and r_ok:
                            both += 1
                        elif p_ok:
                            printed_wins += 1
                        elif r_ok:
                            rederived_wins += 1
                        else:
                            neither += 1
    elapsed = time.perf_counter() - start
    ok = (
        worst_8 <= 1e-9
        and worst_9 <= 1e-9
        and printed_wins == 0
        and neither == 0
        and both == 0
        and rederived_wins > 0
    )
    detail = (
        f"driver-form err {worst_8:.1e}, sink-form err {worst_9:.1e}; d!=1 variant wins: "
        f"rederived {rederived_wins}, printed {printed_wins}, both {both}, neither {neither}; {elapsed:.1f}s"
    )
    report(2, ok, detail)
    assert ok, detail


def test_criterion_3_estimator_convergence():
    lengths = [5000, 10000, 20000, 40000]
    maes = []
    means = {}
    for n in lengths:
        errs = []
        ests = []
        for seed in range(10):
            panel = simulate_benchmark(
                LinSysParams(a=0.0, b=0.0, c=1.0, d=1.0, e=1.0, length=n, seed=seed)
            )
            est = transfer_entropy(panel, PHI, X, EmbeddingSpec(max_lag=2, seed=seed))
            ests.append(est)
            errs.append(abs(est - 0.5))
        maes.append(float(np.mean(errs)))
        means[n] = float(np.mean(ests))
    monotone = all(b <= a for a, b in zip(maes, maes[1:]))
    close = abs(means[20000] - 0.5) <= 0.05
    ok = monotone and close
    detail = (
        f"mean at N=2e4: {means[20000]:.4f} (target 0.5 +-0.05); "
        f"MAE over N {['%.4f' % m for m in maes]} non-increasing={monotone}"
    )
    report(3, ok, detail)
    assert ok, detail


def test_criterion_4_region_check():
    assert gain_region_bounds(6.25) == (0.5, 2.0)
    mismatch_by_sigma = {}
    checked_by_sigma = {}
    for s2 in (1.0, 2.0, 6.25, 9.0):
        boundaries = [1.0] + (list(gain_region_bounds(s2)) if s2 >= 4 else [])
        mismatches = 0
        checked = 0
        for c in np.linspace(0.01, 3.0, 600):
            c = float(c)
            if any(abs(c - b) < 1e-6 for b in boundaries):
                continue
            predicted = region_label(c, s2)
            if predicted is None:
                continue
            checked += 1
            got, _ = closed_form_min_term(c, s2, variant=REDERIVED)
            mismatches += got.label != predicted.label
        mismatch_by_sigma[s2] = mismatches
        checked_by_sigma[s2] = checked
    total_mismatches = sum(mismatch_by_sigma.values())
    ok = total_mismatches == 0
    detail = (
        f"gain_region_bounds(6.25)=(0.5,2.0) exact; label mismatches per sigma^2: "
        + ", ".join(f"{s2}: {mismatch_by_sigma[s2]}/{checked_by_sigma[s2]}" for s2 in mismatch_by_sigma)
    )
    if not ok:
        detail += (
            " | the case table's sink-coupling region at sigma^2 >= 4 contradicts "
            "direct evaluation of the three (oracle-consistent) closed forms: the "
            "true argmin switches driver-to-sink -> driver-to-intermediate at c=1 "
            "for every sigma^2; see notes in the decisions ledger"
        )
    report(4, ok, detail)
    assert ok, detail


def test_criterion_5_subset_selection_oracle():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    checked = 0
    for _ in range(100):
        n = int(rng.integers(1, 13))
        weights = rng.uniform(0.0, 1.0, size=n)
        wlist = weights.tolist()
        # the oracle sums sequentially everywhere so the full set always
        # meets its own eta=1 threshold exactly
        total = sum(wlist)
        for eta in (0.0, 0.3, 0.8, 1.0):
            greedy = min_fraction_subset(weights, eta)
            best = 0 if eta == 0 else None
            if best is None:
                for size in range(n + 1):
                    found = any(
                        sum(wlist[i] for i in combo) >= eta * total
                        for combo in combinations(range(n), size)
                    )
                    if found:
                        best = size
                        break
            assert len(greedy) == best, (wlist, eta, greedy, best)
            if greedy:
                assert sum(wlist[i] for i in greedy) >= eta * total - 1e-12
            checked += 1
    elapsed = time.perf_counter() - start
    detail = f"{checked} instances match brute-force minimum cardinality ({elapsed:.1f}s)"
    report(5, True, detail)


def test_criterion_6_discrete_example():
    triple = fair_bit_triple()
    pair_min = pairwise_min_mi(triple)
    statistic = mss_redundancy(triple)
    ok = abs(pair_min - 1.0) <= 1e-12 and abs(statistic) <= 1e-12
    worst = 0.0
    rng = np.random.default_rng(99)
    for _ in range(20):
        nx, ny, nz = rng.integers(2, 5, size=3)
        joint = random_joint(rng, int(nx), int(ny), int(nz))
        worst = max(worst, abs(specific_info_redundancy(joint) - brute_i_min(joint.as_dict())))
    ok = ok and worst <= 1e-12
    detail = (
        f"pairwise min MI {pair_min:.12f}, statistic redundancy {statistic:.2e}; "
        f"worst i_min deviation vs brute force {worst:.2e}"
    )
    report(6, ok, detail)
    assert ok, detail


def planted_network(length, seed):
    driven = range(1, 5)
    decoys = range(5, 12)
    couplings = [(0, j, 1, 1.0) for j in driven]
    couplings += [(j, 12, 1, 0.6) for j in driven]
    couplings += [(j, 12, 1, 0.45) for j in decoys]
    return LagCouplingSpec(n_processes=13, couplings=couplings, length=length, seed=seed)


def test_criterion_7_pipeline_recovery():
    start = time.perf_counter()
    spec = planted_network(10, 0)
    te_drive = exact_te_linear(spec, 0, 1, 1)
    te_relay = exact_te_linear(spec, 1, 12, 1)
    te_decoy = exact_te_linear(spec, 5, 12, 1)
    margin = min(te_drive, te_relay) - te_decoy
    assert margin >= 0.05, f"planted margin {margin:.4f} below 0.05 bits"

    hits = 0
    for seed in range(20):
        panel = simulate_lag_network(planted_network(10000, 1000 + seed))
        espec = EmbeddingSpec(max_lag=1, k_neighbors=10, seed=seed)
        result = run_pipeline(panel, [12], list(range(12)), espec, SelectionConfig())
        rep = result.reports[0]
        if rep.hidden == 0 and sorted(rep.relevant) == [1, 2, 3, 4]:
            hits += 1
    elapsed = time.perf_counter() - start
    ok = hits >= 16 and elapsed <= 600
    detail = (
        f"driver + all four relays recovered in {hits}/20 seeds (need >=16); "
        f"exact planted TEs {te_drive:.3f}/{te_relay:.3f} vs decoy {te_decoy:.3f} "
        f"(margin {margin:.3f} >= 0.05); {elapsed:.0f}s <= 600s"
    )
    report(7, ok, detail)
    assert ok, detail


def _masked(path):
    text = path.read_text(encoding="utf-8")
    return re.sub(r'"created_at": "[^"]*"', '"created_at": "MASKED"', text)


def test_criterion_8_determinism(tmp_path):
    panel_path = tmp_path / "panel.csv"
    assert cli([
        "simulate", "--output", str(panel_path), "--length", "1200", "--seed", "17",
    ]) == 0
    outs = []
    for name, workers in [("run1", "1"), ("run2", "1"), ("run4", "4")]:
        out_dir = tmp_path / name
        code = cli([
            "select", "--input", str(panel_path), "--targets", "Z",
            "--sources", "psi,phi,X,Y", "--output", str(out_dir),
            "--seed", "17", "--workers", workers,
        ])
        assert code == 0
        outs.append(out_dir)
    csv_files = [
        "te_source_to_target.csv", "te_among_sources.csv", "redundancy_curves.csv",
        "hidden_histogram.csv", "relevant_histogram.csv", "target_relevant_histogram.csv",
    ]
    identical = True
    for other in outs[1:]:
        identical &= _masked(outs[0] / "reports.json") == _masked(other / "reports.json")
        for name in csv_files:
            identical &= (outs[0] / name).read_bytes() == (other / name).read_bytes()
    detail = "reports and CSVs byte-identical across reruns and worker counts (timestamps masked)"
    report(8, identical, detail)
    assert identical
