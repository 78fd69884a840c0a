from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from redte.estimator import EmbeddingSpec
from redte.linsim import LinSysParams, simulate_benchmark
from redte.panel import TEMatrix
from redte.selection import (
    FLAG_ALL_ZERO_REDUNDANCY,
    FLAG_EMPTY_RELEVANT,
    FLAG_ZERO_TARGET_TE,
    RedundancyReport,
    SelectionConfig,
    analyze_target,
    candidate_redundancy,
    candidate_relevant_set,
    known_driver_bound,
    min_fraction_subset,
    pick_hidden,
    run_pipeline,
    target_relevant_set,
    redundancy_bound,
)

# Reference TE levels for the five-process benchmark example: rows/cols
# psi, phi, X, Y, Z; NaN on the diagonal.
EXAMPLE_TE = np.array(
    [
        [np.nan, 0.00, 0.00, 0.00, 0.03],
        [0.00, np.nan, 0.09, 0.09, 0.04],
        [0.00, 0.00, np.nan, 0.00, 0.06],
        [0.00, 0.00, 0.00, np.nan, 0.06],
        [0.00, 0.00, 0.00, 0.00, np.nan],
    ]
)


def example_matrix() -> TEMatrix:
    return TEMatrix(
        (0, 1, 2, 3, 4),
        (0, 1, 2, 3, 4),
        EXAMPLE_TE,
        EXAMPLE_TE,
        labels=("psi", "phi", "X", "Y", "Z"),
    )


def brute_min_cardinality(weights, eta) -> int:
    total = sum(weights)
    if eta <= 0 or total <= 0:
        return 0
    threshold = eta * total
    for size in range(len(weights) + 1):
        for combo in combinations(range(len(weights)), size):
            if sum(weights[i] for i in combo) >= threshold:
                return size
    return len(weights)


def test_min_fraction_subset_examples():
    assert min_fraction_subset([0.5, 0.3, 0.1, 0.1], 0.8) == [0, 1]
    assert min_fraction_subset([0.4, 0.1, 0.5], 0.0) == []
    assert min_fraction_subset([0.2, 0.2, 0.2], 1.0) == [0, 1, 2]
    assert min_fraction_subset([], 0.5) == []
    assert min_fraction_subset([0.0, 0.0], 0.9) == []


def test_min_fraction_subset_tie_breaks_ascending():
    assert min_fraction_subset([0.3, 0.3, 0.3], 0.5) == [0, 1]
    assert min_fraction_subset([0.1, 0.3, 0.3], 0.5) == [1, 2]


def test_min_fraction_subset_rejects_negative():
    with pytest.raises(ValueError):
        min_fraction_subset([0.5, -0.1], 0.5)


@settings(max_examples=60, deadline=None)
@given(
    weights=st.lists(
        st.one_of(st.floats(min_value=0.01, max_value=1.0), st.just(0.0)),
        min_size=1,
        max_size=10,
    ),
    eta=st.sampled_from([0.0, 0.3, 0.8, 1.0]),
)
def test_min_fraction_subset_is_minimal(weights, eta):
    # skip razor's-edge instances where float summation order alone decides
    # whether a prefix meets the threshold; the greedy is float by contract
    total = sum(weights)
    cums = np.cumsum(sorted(weights, reverse=True))
    assume(all(abs(c - eta * total) > 1e-9 for c in cums[:-1]))
    chosen = min_fraction_subset(weights, eta)
    assert len(chosen) == brute_min_cardinality(weights, eta)
    if chosen:
        assert sum(weights[i] for i in chosen) >= eta * total - 1e-12


@settings(max_examples=40, deadline=None)
@given(
    weights=st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=10),
    etas=st.tuples(
        st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0)
    ),
)
def test_min_fraction_subset_monotone_in_eta(weights, etas):
    lo, hi = sorted(etas)
    assert len(min_fraction_subset(weights, lo)) <= len(min_fraction_subset(weights, hi))


def test_target_relevant_set_example_arithmetic():
    # incoming TE column 0.03, 0.04, 0.06, 0.06: total 0.19, threshold 0.152;
    # descending picks X, Y then phi (0.16 >= 0.152)
    ids, flags = target_relevant_set(
        [0, 1, 2, 3], [0.03, 0.04, 0.06, 0.06], SelectionConfig()
    )
    assert ids == [2, 3, 1]
    assert flags == []


def test_target_relevant_set_degenerate():
    ids, flags = target_relevant_set([0, 1], [0.0, 0.0], SelectionConfig())
    assert ids == []
    assert FLAG_ZERO_TARGET_TE in flags


def test_target_relevant_set_single_source():
    ids, _ = target_relevant_set([7], [0.2], SelectionConfig(eta_t=0.8))
    assert ids == [7]


def test_candidate_relevant_set_excludes_candidate():
    m = example_matrix()
    cfg = SelectionConfig()
    t_hat = candidate_relevant_set(1, m, [2, 3, 1], cfg)
    assert sorted(t_hat) == [2, 3]
    assert candidate_relevant_set(1, m, [1], cfg) == []


def test_candidate_relevant_set_zero_row():
    m = example_matrix()
    assert candidate_relevant_set(4, m, [2, 3], SelectionConfig()) == []


def test_candidate_redundancy():
    m = example_matrix()
    value, empty = candidate_redundancy(1, [2, 3], m)
    assert value == pytest.approx(0.09)
    assert not empty
    value, empty = candidate_redundancy(1, [], m)
    assert value == 0.0 and empty
    small = TEMatrix((0, 1, 2), (0, 1, 2),
                     [[np.nan, 0.2, 0.05], [0.0, np.nan, 0.0], [0.0, 0.0, np.nan]],
                     [[np.nan, 0.2, 0.05], [0.0, np.nan, 0.0], [0.0, 0.0, np.nan]])
    assert candidate_redundancy(0, [1, 2], small)[0] == pytest.approx(0.05)


def test_pick_hidden_example():
    m = example_matrix()
    hidden, relevant, r_value, flags = pick_hidden(
        m, [2, 3, 1], SelectionConfig(), candidates=[0, 1, 2, 3]
    )
    assert hidden == 1
    assert sorted(relevant) == [2, 3]
    assert r_value == pytest.approx(0.09)
    assert flags == []


def test_pick_hidden_tie_goes_to_lower_index():
    vals = np.array(
        [[np.nan, 0.2, 0.2], [0.2, np.nan, 0.2], [0.0, 0.0, np.nan]]
    )
    m = TEMatrix((0, 1, 2), (0, 1, 2), vals, vals)
    hidden, _, r, _ = pick_hidden(m, [0, 1, 2], SelectionConfig(), candidates=[0, 1, 2])
    assert hidden == 0
    assert r == pytest.approx(0.2)


def test_pick_hidden_all_zero():
    vals = np.where(np.eye(3), np.nan, 0.0)
    m = TEMatrix((0, 1, 2), (0, 1, 2), vals, vals)
    hidden, relevant, r, flags = pick_hidden(m, [0, 1, 2], SelectionConfig(), candidates=[0, 1, 2])
    assert hidden == 0 and relevant == [] and r == 0.0
    assert FLAG_ALL_ZERO_REDUNDANCY in flags


def test_redundancy_bound():
    assert redundancy_bound(0.04, 0.09, 0.06) == pytest.approx(0.04)
    assert redundancy_bound(0.0, 0.5, 0.2) == 0.0
    assert redundancy_bound(1.0, 1.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        redundancy_bound(-0.1, 0.2, 0.3)


def test_known_driver_bound():
    assert known_driver_bound(0.04, 0.09, 0.09, 0.06, 0.06) == pytest.approx(0.04)
    assert known_driver_bound(0.3, 0.0, 0.4, 0.5, 0.6) == 0.0


def test_three_term_bound_collapses_to_five_term_bound():
    # with hidden=driver and relevant={both intermediates}, the three-term
    # bound collapses to the five-term one
    vals = dict(phi_z=0.04, phi_x=0.09, phi_y=0.09, x_z=0.06, y_z=0.06)
    three = redundancy_bound(
        vals["phi_z"], min(vals["phi_x"], vals["phi_y"]), min(vals["x_z"], vals["y_z"])
    )
    five = known_driver_bound(*vals.values())
    assert three == pytest.approx(five, abs=1e-15)
    assert three <= five + 1e-15


def test_known_driver_bound_matches_closed_form_region():
    from redte.gauss import ClosedFormParams, te_phi_to_x, te_phi_to_z, te_x_to_z

    p = ClosedFormParams(0.5, 0.5, 1.0, 1.0)
    got = known_driver_bound(
        te_phi_to_z(p), te_phi_to_x(p), te_phi_to_x(p), te_x_to_z(p), te_x_to_z(p)
    )
    assert got == pytest.approx(te_phi_to_z(p), abs=1e-12)


def test_analyze_target_example_report():
    m = example_matrix()
    te_col = [0.03, 0.04, 0.06, 0.06]  # psi, phi, X, Y into Z
    report = analyze_target(4, [0, 1, 2, 3], te_col, m, SelectionConfig())
    assert report.hidden == 1
    assert sorted(report.relevant) == [2, 3]
    assert report.r_phi_to_z == pytest.approx(0.04)
    assert report.r_phi_to_set == pytest.approx(0.09)
    assert report.r_set_to_z == pytest.approx(0.06)
    assert report.bound == pytest.approx(0.04)
    assert report.degenerate_flags == ()


def test_analyze_target_all_zero_column():
    m = example_matrix()
    report = analyze_target(4, [0, 2, 3], [0.0, 0.0, 0.0], m, SelectionConfig())
    assert report.bound == 0.0
    assert FLAG_ZERO_TARGET_TE in report.degenerate_flags
    assert FLAG_EMPTY_RELEVANT in report.degenerate_flags


def test_analyze_target_deterministic():
    m = example_matrix()
    te_col = [0.03, 0.04, 0.06, 0.06]
    a = analyze_target(4, [0, 1, 2, 3], te_col, m, SelectionConfig())
    b = analyze_target(4, [0, 1, 2, 3], te_col, m, SelectionConfig())
    assert a == b


def test_report_invariants_enforced():
    with pytest.raises(ValueError):
        RedundancyReport(4, (1, 2), 1, (1,), 0.1, 0.1, 0.1, 0.1)
    with pytest.raises(ValueError):
        RedundancyReport(4, (2,), 1, (3,), 0.1, 0.1, 0.1, 0.1)
    with pytest.raises(ValueError):
        RedundancyReport(4, (2, 3), 1, (2,), 0.1, 0.2, 0.3, 0.25)


def test_run_pipeline_structure():
    panel = simulate_benchmark(
        LinSysParams(a=1 / 3, b=1 / 5, c=1 / 2, d=1 / 3, e=1 / 3, length=1200, seed=21)
    )
    spec = EmbeddingSpec(max_lag=2, seed=21)
    result = run_pipeline(panel, [4], [0, 1, 2, 3], spec, SelectionConfig())
    assert len(result.reports) == 1
    report = result.reports[0]
    assert report.target == 4
    assert report.hidden not in report.relevant
    assert set(report.relevant) <= set(report.target_relevant)
    assert report.bound == min(report.r_phi_to_z, report.r_phi_to_set, report.r_set_to_z)
    # shared source-by-source matrix covers all candidate pairs
    assert result.te_among_sources.values.shape == (4, 4)


def test_run_pipeline_target_in_sources_excluded():
    panel = simulate_benchmark(
        LinSysParams(a=0.0, b=0.0, c=1.0, d=1.0, e=1.0, length=900, seed=30)
    )
    spec = EmbeddingSpec(max_lag=1, seed=30)
    result = run_pipeline(panel, [4], [0, 1, 2, 3, 4], spec, SelectionConfig())
    report = result.reports[0]
    assert 4 not in report.target_relevant
    assert report.hidden != 4


def test_run_pipeline_independent_sources_low_bound():
    rng = np.random.default_rng(33)
    from redte.panel import TimeSeriesPanel

    panel = TimeSeriesPanel(
        ("a", "b", "c", "t"), rng.standard_normal((4, 4000))
    )
    spec = EmbeddingSpec(max_lag=1, seed=33)
    result = run_pipeline(panel, [3], [0, 1, 2], spec, SelectionConfig())
    assert result.reports[0].bound <= 0.02
