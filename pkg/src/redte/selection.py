"""Source selection and the directed-redundancy bound.

Pipeline per target: (1) the target-relevant set, the smallest group of
sources carrying at least an eta_T fraction of the total transfer entropy
into the target; (2) a hidden-process scan where every source is scored by
the minimal TE it sends into its own minimal eta_H receiver set inside the
target-relevant group; (3) the winner's receiver set becomes the relevant
sources, and the redundancy bound is the minimum of hidden-to-target,
hidden-to-relevant and relevant-to-target transfer entropies.

All thresholds operate on clamped (nonnegative) TE values; ties are broken
by ascending channel index so outcomes are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .estimator import EmbeddingSpec, te_matrix
from .panel import ProcessId, TEMatrix, TimeSeriesPanel

FLAG_ZERO_TARGET_TE = "zero_total_te_to_target"
FLAG_EMPTY_TARGET_RELEVANT = "empty_target_relevant_set"
FLAG_ALL_ZERO_REDUNDANCY = "all_candidate_redundancies_zero"
FLAG_EMPTY_RELEVANT = "empty_relevant_set"


@dataclass(frozen=True)
class SelectionConfig:
    """Fractions of total TE that the selected subsets must carry."""

    eta_t: float = 0.8
    eta_h: float = 0.8

    def __post_init__(self):
        if not (0.0 <= self.eta_t <= 1.0 and 0.0 <= self.eta_h <= 1.0):
            raise ValueError("eta_t and eta_h must lie in [0, 1]")


@dataclass(frozen=True)
class RedundancyReport:
    """Per-target outcome: selected sets, the three bound terms, flags."""

    target: ProcessId
    target_relevant: tuple[ProcessId, ...]
    hidden: ProcessId
    relevant: tuple[ProcessId, ...]
    r_phi_to_z: float
    r_phi_to_set: float
    r_set_to_z: float
    bound: float
    degenerate_flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "target_relevant", tuple(self.target_relevant))
        object.__setattr__(self, "relevant", tuple(self.relevant))
        object.__setattr__(self, "degenerate_flags", tuple(self.degenerate_flags))
        if not set(self.relevant) <= set(self.target_relevant):
            raise ValueError("relevant sources must lie inside the target-relevant set")
        if self.hidden in self.relevant:
            raise ValueError("the hidden process cannot be one of its relevant sources")
        terms = (self.r_phi_to_z, self.r_phi_to_set, self.r_set_to_z)
        if any(t < 0 for t in terms) or self.bound < 0:
            raise ValueError("bound terms must be nonnegative")
        if self.bound != min(terms):
            raise ValueError("bound must equal the minimum of the three terms")


def min_fraction_subset(weights, eta: float) -> list[int]:
    """Positions of the minimum-cardinality subset reaching eta of the total.

    Weights must be nonnegative. Realized by a descending sort (ties broken
    by ascending position) accumulated until the threshold is met or
    exceeded; eta = 0 or an all-zero total yields the empty set. For this
    constraint the greedy prefix is an exact minimizer.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError("weights must be 1-d")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    total = float(w.sum())
    if eta <= 0.0 or total <= 0.0:
        return []
    order = sorted(range(len(w)), key=lambda idx: (-w[idx], idx))
    threshold = eta * total
    chosen: list[int] = []
    acc = 0.0
    for idx in order:
        chosen.append(idx)
        acc += float(w[idx])
        if acc >= threshold:
            return chosen
    return chosen


def target_relevant_set(
    source_ids, te_to_target, cfg: SelectionConfig
) -> tuple[list[ProcessId], list[str]]:
    """The target-relevant set over clamped source-to-target TEs, with
    degeneracy flags when the total incoming TE is zero."""
    source_ids = list(source_ids)
    w = np.asarray(te_to_target, dtype=np.float64)
    if len(source_ids) != len(w):
        raise ValueError("need one TE value per source")
    flags = []
    if float(w.sum()) <= 0.0:
        flags.append(FLAG_ZERO_TARGET_TE)
    # order candidates by channel index so positional tie-breaking inside
    # min_fraction_subset matches the ascending-index rule
    order = sorted(range(len(source_ids)), key=lambda pos: source_ids[pos])
    positions = min_fraction_subset(w[order], cfg.eta_t)
    return [source_ids[order[pos]] for pos in positions], flags


def _clamped(te: TEMatrix, source: ProcessId, target: ProcessId) -> float:
    value = te.value(source, target)
    return 0.0 if np.isnan(value) else float(value)


def candidate_relevant_set(
    i: ProcessId, te_among_sources: TEMatrix, t_set, cfg: SelectionConfig
) -> list[ProcessId]:
    """Minimal subset of the target-relevant set receiving an eta_H
    fraction of candidate i's outgoing TE; i itself is excluded."""
    receivers = sorted(j for j in t_set if j != i)
    weights = [_clamped(te_among_sources, i, j) for j in receivers]
    positions = min_fraction_subset(weights, cfg.eta_h)
    return [receivers[pos] for pos in positions]


def candidate_redundancy(
    i: ProcessId, t_hat, te_among_sources: TEMatrix
) -> tuple[float, bool]:
    """Minimal clamped TE from candidate i into its receiver set; an empty
    receiver set scores 0 and is flagged via the returned boolean."""
    t_hat = list(t_hat)
    if not t_hat:
        return 0.0, True
    return min(_clamped(te_among_sources, i, j) for j in t_hat), False


def pick_hidden(
    te_among_sources: TEMatrix, t_set, cfg: SelectionConfig, candidates=None
) -> tuple[ProcessId, list[ProcessId], float, list[str]]:
    """Choose the hidden process: the candidate with the greatest minimal
    redundancy into its receiver set. Ties fall to the lowest channel
    index; an all-zero field is flagged and yields the first candidate."""
    ids = list(candidates) if candidates is not None else list(te_among_sources.row_ids)
    if not ids:
        raise ValueError("need at least one candidate source")
    best_id = None
    best_set: list[ProcessId] = []
    best_r = -1.0
    for i in sorted(ids):
        t_hat = candidate_relevant_set(i, te_among_sources, t_set, cfg)
        r_i, _empty = candidate_redundancy(i, t_hat, te_among_sources)
        if r_i > best_r:
            best_id, best_set, best_r = i, t_hat, r_i
    flags = [FLAG_ALL_ZERO_REDUNDANCY] if best_r <= 0.0 else []
    return best_id, best_set, best_r, flags


def redundancy_bound(r_phi_to_z: float, r_phi_to_set: float, r_set_to_z: float) -> float:
    """Upper bound on directed redundancy: the minimum of the three terms."""
    terms = (r_phi_to_z, r_phi_to_set, r_set_to_z)
    if any(t < 0 for t in terms):
        raise ValueError("bound terms must be nonnegative")
    return min(terms)


def known_driver_bound(
    te_phi_z: float, te_phi_x: float, te_phi_y: float, te_x_z: float, te_y_z: float
) -> float:
    """Five-term bound for a known hidden process and two known relays."""
    terms = (te_phi_z, te_phi_x, te_phi_y, te_x_z, te_y_z)
    if any(t < 0 for t in terms):
        raise ValueError("bound terms must be nonnegative")
    return min(terms)


def analyze_target(
    target: ProcessId,
    source_ids,
    te_to_target,
    te_among_sources: TEMatrix,
    cfg: SelectionConfig,
) -> RedundancyReport:
    """Run the selection chain for one target given TE estimates."""
    t_set, flags = target_relevant_set(source_ids, te_to_target, cfg)
    if not t_set:
        flags.append(FLAG_EMPTY_TARGET_RELEVANT)
    hidden, relevant, r_phi_to_set, pick_flags = pick_hidden(
        te_among_sources, t_set, cfg, candidates=source_ids
    )
    flags.extend(pick_flags)
    by_id = dict(zip(source_ids, np.asarray(te_to_target, dtype=np.float64)))
    r_phi_to_z = float(by_id[hidden])
    if relevant:
        r_set_to_z = min(float(by_id[j]) for j in relevant)
    else:
        r_set_to_z = 0.0
        flags.append(FLAG_EMPTY_RELEVANT)
    return RedundancyReport(
        target=target,
        target_relevant=tuple(t_set),
        hidden=hidden,
        relevant=tuple(relevant),
        r_phi_to_z=r_phi_to_z,
        r_phi_to_set=r_phi_to_set,
        r_set_to_z=r_set_to_z,
        bound=redundancy_bound(r_phi_to_z, r_phi_to_set, r_set_to_z),
        degenerate_flags=tuple(flags),
    )


@dataclass(frozen=True)
class PipelineResult:
    """Reports plus the TE matrices they were derived from."""

    reports: tuple[RedundancyReport, ...]
    te_source_to_target: TEMatrix
    te_among_sources: TEMatrix


def run_pipeline(
    panel: TimeSeriesPanel,
    targets,
    sources,
    spec: EmbeddingSpec,
    cfg: SelectionConfig,
    n_jobs: int = 1,
) -> PipelineResult:
    """Estimate TEs and emit one redundancy report per target.

    The source-to-source matrix is estimated once and shared across
    targets; a process appearing as both source and target is excluded
    from its own analysis. Degenerate targets yield flagged reports.
    """
    targets = [int(t) for t in targets]
    sources = [int(s) for s in sources]
    col_matrix = te_matrix(panel, sources, targets, spec, n_jobs=n_jobs)
    src_matrix = te_matrix(panel, sources, sources, spec, n_jobs=n_jobs)
    reports = []
    for target in targets:
        usable = [s for s in sources if s != target]
        te_col = [_clamped(col_matrix, s, target) for s in usable]
        reports.append(analyze_target(target, usable, te_col, src_matrix, cfg))
    return PipelineResult(tuple(reports), col_matrix, src_matrix)
