"""Simulation of linear Gaussian networks with lagged couplings.

Provides the five-process benchmark system (two autonomous AR(1) drivers,
two driven intermediates, one sink fed by both intermediates and one
driver) and a generic first-order specification where arbitrary lagged
linear couplings plus independent Gaussian noise drive each process.

All simulators are deterministic given a seed: each process draws from its
own stream derived from (seed, process index), so adding a process never
perturbs the others' sample paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import UnstableError
from .panel import TimeSeriesPanel

BENCHMARK_LABELS = ("psi", "phi", "X", "Y", "Z")

_DEFAULT_NOISE = {name: 1.0 for name in BENCHMARK_LABELS}


@dataclass(frozen=True)
class LinSysParams:
    """Coefficients and noise scales of the five-process benchmark system.

    The recursions (all noises independent standard normal scaled by
    ``noise_std``):

        psi[k+1] = a psi[k] + W_psi[k]
        phi[k+1] = a phi[k] + W_phi[k]
        X[k+1]   = b X[k] + c phi[k-1] + W_X[k]
        Y[k+1]   = b Y[k] + c phi[k-1] + W_Y[k]
        Z[k+1]   = b Z[k] + d X[k-1] + d Y[k-1] + e psi[k-1] + W_Z[k]
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    length: int
    noise_std: dict = field(default_factory=lambda: dict(_DEFAULT_NOISE))
    burn_in: int = 1000
    seed: int = 0

    def __post_init__(self):
        if abs(self.a) >= 1 or abs(self.b) >= 1:
            raise UnstableError(f"|a|={abs(self.a)} and |b|={abs(self.b)} must be < 1")
        merged = dict(_DEFAULT_NOISE)
        merged.update(self.noise_std)
        unknown = set(merged) - set(BENCHMARK_LABELS)
        if unknown:
            raise ValueError(f"unknown process names in noise_std: {sorted(unknown)}")
        if any(s <= 0 for s in merged.values()):
            raise UnstableError("noise standard deviations must be positive")
        if self.length < 1 or self.burn_in < 0:
            raise ValueError("need length >= 1 and burn_in >= 0")
        object.__setattr__(self, "noise_std", merged)


@dataclass(frozen=True)
class LagCouplingSpec:
    """A network of processes driven by lagged linear couplings.

    ``couplings`` is a list of (from_process, to_process, lag, gain) with
    lag >= 1; a self-coupling at lag 1 is an AR(1) term. Update rule:

        x[j, k] = sum over couplings into j of gain * x[from, k - lag]
                  + noise_std[j] * W[j, k-1]

    with zero initial history. The implied companion matrix must have
    spectral radius < 1.
    """

    n_processes: int
    couplings: tuple = ()
    noise_std: tuple | float = 1.0
    length: int = 1
    burn_in: int = 1000
    seed: int = 0
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "couplings", tuple(tuple(c) for c in self.couplings))
        n = self.n_processes
        if n < 1 or self.length < 1 or self.burn_in < 0:
            raise ValueError("need n_processes, length >= 1 and burn_in >= 0")
        for src, dst, lag, _gain in self.couplings:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"coupling references process outside 0..{n - 1}")
            if lag < 1:
                raise ValueError("coupling lags must be >= 1")
        std = self.noise_std
        std = tuple([float(std)] * n) if np.isscalar(std) else tuple(float(s) for s in std)
        if len(std) != n or any(s <= 0 for s in std):
            raise UnstableError("need one positive noise std per process")
        object.__setattr__(self, "noise_std", std)
        labels = self.labels if self.labels is not None else tuple(f"p{i}" for i in range(n))
        if len(labels) != n:
            raise ValueError("need one label per process")
        object.__setattr__(self, "labels", tuple(labels))
        rho = spectral_radius(lag_matrices(self))
        if rho >= 1.0:
            raise UnstableError(f"companion spectral radius {rho:.6g} >= 1")


def lag_matrices(spec: LagCouplingSpec) -> list[np.ndarray]:
    """Per-lag coupling matrices G[l-1][to, from] for l = 1..max_lag."""
    max_lag = max((lag for _, _, lag, _ in spec.couplings), default=1)
    mats = [np.zeros((spec.n_processes, spec.n_processes)) for _ in range(max_lag)]
    for src, dst, lag, gain in spec.couplings:
        mats[lag - 1][dst, src] += gain
    return mats


def companion_matrix(mats: list[np.ndarray]) -> np.ndarray:
    n = mats[0].shape[0]
    p = len(mats)
    comp = np.zeros((n * p, n * p))
    for l, g in enumerate(mats):
        comp[:n, l * n : (l + 1) * n] = g
    if p > 1:
        comp[n:, : n * (p - 1)] = np.eye(n * (p - 1))
    return comp


def spectral_radius(mats: list[np.ndarray]) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(companion_matrix(mats)))))


def benchmark_coupling_spec(p: LinSysParams) -> LagCouplingSpec:
    """The benchmark system re-expressed as a generic lag network."""
    couplings = [
        (0, 0, 1, p.a),
        (1, 1, 1, p.a),
        (2, 2, 1, p.b),
        (3, 3, 1, p.b),
        (4, 4, 1, p.b),
        (1, 2, 2, p.c),
        (1, 3, 2, p.c),
        (2, 4, 2, p.d),
        (3, 4, 2, p.d),
        (0, 4, 2, p.e),
    ]
    return LagCouplingSpec(
        n_processes=5,
        couplings=couplings,
        noise_std=tuple(p.noise_std[name] for name in BENCHMARK_LABELS),
        length=p.length,
        burn_in=p.burn_in,
        seed=p.seed,
        labels=BENCHMARK_LABELS,
    )


def _noise_streams(seed: int, noise_std, n_samples: int) -> np.ndarray:
    rows = []
    for j, scale in enumerate(noise_std):
        rng = np.random.default_rng(np.random.SeedSequence((seed, j)))
        rows.append(scale * rng.standard_normal(n_samples))
    return np.vstack(rows)


def _delayed(x: np.ndarray, lag: int) -> np.ndarray:
    out = np.zeros_like(x)
    out[lag:] = x[:-lag]
    return out


def simulate_benchmark(p: LinSysParams) -> TimeSeriesPanel:
    """Simulate the five-process benchmark; returns a (psi, phi, X, Y, Z) panel.

    The update at step k+1 reads lag-two state at k-1 exactly as written;
    states before step 2 start at zero and the first ``burn_in`` samples
    are discarded.
    """
    total = p.burn_in + p.length
    noise = _noise_streams(p.seed, [p.noise_std[name] for name in BENCHMARK_LABELS], total)
    w_psi, w_phi, w_x, w_y, w_z = noise

    def ar(coeff: float, drive: np.ndarray) -> np.ndarray:
        return lfilter([1.0], [1.0, -coeff], drive)

    psi = ar(p.a, _delayed(w_psi, 1))
    phi = ar(p.a, _delayed(w_phi, 1))
    x = ar(p.b, p.c * _delayed(phi, 2) + _delayed(w_x, 1))
    y = ar(p.b, p.c * _delayed(phi, 2) + _delayed(w_y, 1))
    z = ar(
        p.b,
        p.d * _delayed(x, 2) + p.d * _delayed(y, 2) + p.e * _delayed(psi, 2) + _delayed(w_z, 1),
    )
    data = np.vstack([psi, phi, x, y, z])[:, p.burn_in :]
    return TimeSeriesPanel(BENCHMARK_LABELS, data)


def simulate_lag_network(spec: LagCouplingSpec) -> TimeSeriesPanel:
    """Simulate a generic lagged linear network; deterministic given seed."""
    total = spec.burn_in + spec.length
    noise = _noise_streams(spec.seed, spec.noise_std, total)
    mats = lag_matrices(spec)
    n = spec.n_processes
    x = np.zeros((n, total))
    for k in range(1, total):
        acc = noise[:, k - 1].copy()
        for l, g in enumerate(mats, start=1):
            if k - l >= 0:
                acc += g @ x[:, k - l]
        x[:, k] = acc
    return TimeSeriesPanel(spec.labels, x[:, spec.burn_in :])


def stationary_variance_ar1(a: float, noise_var: float) -> float:
    """Steady-state variance noise_var / (1 - a^2) of a stable AR(1)."""
    if abs(a) >= 1:
        raise UnstableError(f"|a|={abs(a)} must be < 1")
    if noise_var <= 0:
        raise ValueError("noise_var must be positive")
    return noise_var / (1.0 - a * a)
