"""Nonparametric transfer-entropy estimation from sample paths.

Transfer entropy is estimated as the conditional mutual information
between the source's recent past and the target's present given the
target's own past, using the nearest-neighbor (digamma-corrected) CMI
estimator: one k-th-neighbor radius per point in the joint space under the
max-norm, strict-inequality neighbor counts in the three marginal
subspaces, and

    psi(k) - < psi(n_xz + 1) + psi(n_yz + 1) - psi(n_z + 1) >

converted to bits. Ties are broken by a deterministic counter-based jitter
applied after standardization, so estimates are invariant under affine
rescaling of the input channels and bit-reproducible for a given seed
regardless of evaluation order or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateGeometryError,
    DomainError,
    SameProcessError,
    TooShortError,
)
from .neighbors import ksg_marginal_counts, kth_neighbor_radius
from .panel import ProcessId, TEMatrix, TimeSeriesPanel, _standardize_channel

_LOG2E = 1.0 / math.log(2.0)


@dataclass(frozen=True)
class EmbeddingSpec:
    """History length, prediction horizon and neighbor count for estimation."""

    max_lag: int = 5
    horizon: int = 1
    k_neighbors: int = 10
    jitter_amplitude: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.max_lag < 1 or self.horizon < 1 or self.k_neighbors < 1:
            raise ValueError("need max_lag >= 1, horizon >= 1, k_neighbors >= 1")
        if self.jitter_amplitude < 0:
            raise ValueError("jitter_amplitude must be >= 0")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class EmbeddedCloud:
    """Joint vectors [source past L, target present, target past L]."""

    points: np.ndarray
    source_dim: int

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 * self.source_dim + 1:
            raise ValueError("points must be (M, 2 * source_dim + 1)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]


def embed(source: np.ndarray, target: np.ndarray, spec: EmbeddingSpec) -> EmbeddedCloud:
    """Build the joint embedding cloud for one (source, target) pair.

    Point at anchor t holds source[t-1 .. t-L], target[t-1+u] and
    target[t-1 .. t-L]; anchors run over all positions where every index is
    valid, giving M = N - L - u + 1 points.
    """
    source = np.asarray(source, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if source.ndim != 1 or target.ndim != 1 or len(source) != len(target):
        raise ValueError("source and target must be 1-d arrays of equal length")
    n = len(source)
    L, u = spec.max_lag, spec.horizon
    if n < L + u + spec.k_neighbors + 1:
        raise TooShortError(
            f"need at least {L + u + spec.k_neighbors + 1} samples, got {n}"
        )
    m = n - L - u + 1
    cols = []
    for lag in range(1, L + 1):
        cols.append(source[L - lag : L - lag + m])
    cols.append(target[L + u - 1 : L + u - 1 + m])
    for lag in range(1, L + 1):
        cols.append(target[L - lag : L - lag + m])
    return EmbeddedCloud(np.column_stack(cols), L)


# Asymptotic series ln x - 1/(2x) - sum B_2n / (2n x^2n), applied after
# shifting the argument above 10 by the recurrence psi(x+1) = psi(x) + 1/x.
_DIGAMMA_SHIFT = 10.0


def digamma(x):
    """Digamma function, elementwise; absolute error below 1e-10 on
    [1e-3, 1e6]. Raises DomainError for arguments <= 0."""
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    vals = np.atleast_1d(arr).copy()
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        raise DomainError("digamma requires finite x > 0")
    acc = np.zeros_like(vals)
    mask = vals < _DIGAMMA_SHIFT
    while mask.any():
        acc[mask] -= 1.0 / vals[mask]
        vals[mask] += 1.0
        mask = vals < _DIGAMMA_SHIFT
    inv = 1.0 / vals
    inv2 = inv * inv
    tail = 691.0 / 32760.0
    tail = 1.0 / 132.0 - inv2 * tail
    tail = 1.0 / 240.0 - inv2 * tail
    tail = 1.0 / 252.0 - inv2 * tail
    tail = 1.0 / 120.0 - inv2 * tail
    tail = 1.0 / 12.0 - inv2 * tail
    out = acc + np.log(vals) - 0.5 * inv - inv2 * tail
    return float(out[0]) if scalar else out


_MAX_ZERO_RADIUS_FRACTION = 0.01


def _knn_cmi_nats(cloud: EmbeddedCloud, k: int, counts_method: str = "auto") -> float:
    m = cloud.n_points
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < {m} points, got k={k}")
    radii = kth_neighbor_radius(cloud.points, k)
    if np.count_nonzero(radii == 0.0) > _MAX_ZERO_RADIUS_FRACTION * m:
        raise DegenerateGeometryError(
            "more than 1% of points have a zero k-th-neighbor distance; "
            "the data contains too many exact ties (is jitter disabled?)"
        )
    n_xz, n_yz, n_z = ksg_marginal_counts(cloud.points, cloud.source_dim, radii, counts_method)
    correction = digamma(n_xz + 1.0) + digamma(n_yz + 1.0) - digamma(n_z + 1.0)
    return digamma(float(k)) - float(np.mean(correction))


def knn_cmi(cloud: EmbeddedCloud, k: int, counts_method: str = "auto") -> float:
    """Conditional-MI estimate I(source past; present | target past), bits.

    Raw estimator output: may be slightly negative. Raises
    DegenerateGeometryError when more than 1% of points have a zero
    k-th-neighbor distance.
    """
    return _knn_cmi_nats(cloud, k, counts_method) * _LOG2E


def _jitter_series(
    values: np.ndarray, seed: int, source: ProcessId, target: ProcessId, channel: ProcessId,
    amplitude: float,
) -> np.ndarray:
    if amplitude == 0.0:
        return values
    key = np.random.SeedSequence((int(seed), int(source), int(target), int(channel)))
    uniform = np.random.Generator(np.random.Philox(key)).random(len(values))
    return values + amplitude * (uniform - 0.5)


def transfer_entropy(
    panel: TimeSeriesPanel,
    source: ProcessId,
    target: ProcessId,
    spec: EmbeddingSpec,
) -> float:
    """Raw transfer-entropy estimate from source to target, in bits.

    Standardizes the two channels, applies deterministic tie-breaking
    jitter seeded by (seed, source, target), embeds, and runs the
    nearest-neighbor CMI estimator. Deterministic given ``spec.seed``.
    """
    if source == target:
        raise SameProcessError(f"source and target are both process {source}")
    for pid in (source, target):
        if not 0 <= pid < panel.n_channels:
            raise ValueError(f"process id {pid} outside 0..{panel.n_channels - 1}")
    src = _standardize_channel(panel.channel(source), panel.channels[source])
    tgt = _standardize_channel(panel.channel(target), panel.channels[target])
    amp = spec.jitter_amplitude
    src = _jitter_series(src, spec.seed, source, target, source, amp)
    tgt = _jitter_series(tgt, spec.seed, source, target, target, amp)
    cloud = embed(src, tgt, spec)
    return knn_cmi(cloud, spec.k_neighbors)


def te_matrix(
    panel: TimeSeriesPanel,
    sources,
    targets,
    spec: EmbeddingSpec,
    n_jobs: int = 1,
) -> TEMatrix:
    """Estimate all ordered (source, target) pairs with source != target.

    Same-process entries are absent (NaN). Each pair's jitter stream is
    keyed by (seed, source, target), so the result is independent of
    evaluation order and worker count; a failing pair aborts the whole
    matrix with the pair ids prepended to the error.
    """
    sources = [int(s) for s in sources]
    targets = [int(t) for t in targets]
    raw = np.full((len(sources), len(targets)), np.nan)

    def run_pair(pos):
        r, c = pos
        i, j = sources[r], targets[c]
        if i == j:
            return np.nan
        try:
            return transfer_entropy(panel, i, j, spec)
        except Exception as exc:
            exc.args = (f"pair ({i}->{j}): {exc}",)
            raise

    positions = [(r, c) for r in range(len(sources)) for c in range(len(targets))]
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(run_pair, positions))
    else:
        results = [run_pair(pos) for pos in positions]
    for (r, c), value in zip(positions, results):
        raw[r, c] = value
    values = np.where(np.isnan(raw), np.nan, np.maximum(raw, 0.0))
    labels = tuple(panel.channels)
    return TEMatrix(tuple(sources), tuple(targets), values, raw, labels)
