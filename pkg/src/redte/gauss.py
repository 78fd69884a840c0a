"""Closed-form transfer entropies for the benchmark system and an exact
Gaussian oracle.

For the memoryless-regression regime (both autoregressive coefficients
zero) the three directed couplings have closed forms in the gains and the
driver's stationary variance. The denominator of the source-to-sink form
is implemented in two variants ("printed" and "rederived", differing by a
single power of the gain d); the rederived one is the variant consistent
with the exact stationary covariance of the system, which this module can
compute independently via the discrete Lyapunov equation.

Internally everything is computed in natural log and converted to bits at
the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_discrete_lyapunov

from .errors import RegionUndefinedError, SingularCovarianceError, UnstableError
from .linsim import LagCouplingSpec, LinSysParams, benchmark_coupling_spec, lag_matrices
from .panel import ProcessId

_LN2 = math.log(2.0)

PRINTED = "printed"
REDERIVED = "rederived"
#: Variant of the source-to-sink denominator that agrees with the exact
#: Gaussian oracle (enforced by test).
DEFAULT_VARIANT = REDERIVED

PHI_TO_Z = "phi_to_z"
PHI_TO_X = "phi_to_x"
X_TO_Z = "x_to_z"


@dataclass(frozen=True)
class ClosedFormParams:
    """Gains and driver variance entering the closed forms."""

    c: float
    d: float
    e: float
    sigma_phi_sq: float
    variant: str = DEFAULT_VARIANT

    def __post_init__(self):
        if self.sigma_phi_sq <= 0:
            raise ValueError("sigma_phi_sq must be positive")
        if self.variant not in (PRINTED, REDERIVED):
            raise ValueError(f"variant must be {PRINTED!r} or {REDERIVED!r}")


def te_phi_to_x(p: ClosedFormParams) -> float:
    """Transfer entropy from the hidden driver into an intermediate, bits."""
    return 0.5 * math.log(p.c * p.c * p.sigma_phi_sq + 1.0) / _LN2


def te_phi_to_z(p: ClosedFormParams) -> float:
    """Transfer entropy from the hidden driver into the sink, bits."""
    num = 4 * p.d * p.d * p.c * p.c * p.sigma_phi_sq + 2 * p.d * p.d + p.e * p.e + 1.0
    den = 2 * p.d * p.d + p.e * p.e + 1.0
    return 0.5 * math.log(num / den) / _LN2


def te_x_to_z(p: ClosedFormParams) -> float:
    """Transfer entropy from an intermediate into the sink, bits.

    The ``printed`` variant carries a single factor of d on the conditional
    variance term in the denominator; ``rederived`` carries d squared and
    matches the exact stationary covariance.
    """
    cs = p.c * p.c * p.sigma_phi_sq
    v = cs / (cs + 1.0)
    num = 4 * cs * p.d * p.d + 2 * p.d * p.d + p.e * p.e + 1.0
    dv = p.d * v if p.variant == PRINTED else p.d * p.d * v
    den = dv + p.d * p.d + p.e * p.e + 1.0
    return 0.5 * math.log(num / den) / _LN2


def gain_region_bounds(sigma_phi_sq: float) -> tuple[float, float]:
    """Bounds of the gain region where the sink coupling is the minimum.

    Requires sigma_phi_sq >= 4; the two bounds multiply to 1.
    """
    if sigma_phi_sq < 4.0:
        raise RegionUndefinedError(
            f"bounds need sigma_phi_sq >= 4, got {sigma_phi_sq}"
        )
    sigma = math.sqrt(sigma_phi_sq)
    disc = math.sqrt(sigma_phi_sq - 4.0)
    return 0.5 * sigma - 0.5 * disc, 0.5 * sigma + 0.5 * disc


@dataclass(frozen=True)
class CaseRegion:
    """A region of the (c, sigma_phi_sq) plane with a known minimum term."""

    label: str
    lower_gain: float | None = None
    upper_gain: float | None = None

    def __post_init__(self):
        if self.lower_gain is not None and self.upper_gain is not None and self.lower_gain > self.upper_gain:
            raise ValueError("lower_gain must not exceed upper_gain")


def region_label(c: float, sigma_phi_sq: float) -> CaseRegion | None:
    """Predicted argmin label for c = d > 0, e = 1; None where the case
    table is silent."""
    if c <= 0:
        return None
    if sigma_phi_sq < 4.0:
        return CaseRegion(PHI_TO_Z) if c < 1.0 else CaseRegion(PHI_TO_X)
    lower, upper = gain_region_bounds(sigma_phi_sq)
    if lower <= c <= upper:
        return CaseRegion(X_TO_Z, lower, upper)
    return None


def closed_form_min_term(
    c: float, sigma_phi_sq: float, variant: str = DEFAULT_VARIANT
) -> tuple[CaseRegion, float]:
    """Directly evaluate the three closed forms at c = d, e = 1 and return
    the argmin label (with the region bounds when defined) and its value."""
    if c <= 0:
        raise ValueError("the case analysis assumes c = d > 0")
    p = ClosedFormParams(c=c, d=c, e=1.0, sigma_phi_sq=sigma_phi_sq, variant=variant)
    candidates = [
        (PHI_TO_Z, te_phi_to_z(p)),
        (PHI_TO_X, te_phi_to_x(p)),
        (X_TO_Z, te_x_to_z(p)),
    ]
    label, bits = min(candidates, key=lambda item: item[1])
    lower, upper = (None, None)
    if sigma_phi_sq >= 4.0:
        lower, upper = gain_region_bounds(sigma_phi_sq)
    return CaseRegion(label, lower, upper), bits


def _chol_logdet(cov: np.ndarray) -> float:
    """log det via Cholesky; raises SingularCovarianceError on failure or
    when any pivot falls below 1e-12 of the largest pivot."""
    if cov.size == 0:
        return 0.0
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovarianceError(f"covariance not positive definite: {exc}") from exc
    pivots = np.diag(chol) ** 2
    if pivots.min() < 1e-12 * pivots.max():
        raise SingularCovarianceError("covariance has a near-zero pivot")
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def gaussian_cmi_from_cov(cov: np.ndarray, x_idx, y_idx, z_idx=()) -> float:
    """Conditional mutual information I(X; Y | Z) of a joint Gaussian, bits.

    ``cov`` is the joint covariance; the index sets select the X, Y and
    conditioning blocks. Empty conditioning reduces to ordinary mutual
    information. Tiny negative rounding is clamped to 0.
    """
    cov = np.asarray(cov, dtype=np.float64)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be square")
    if not np.allclose(cov, cov.T, rtol=0, atol=1e-10 * max(1.0, np.abs(cov).max())):
        raise ValueError("covariance must be symmetric")
    cov = 0.5 * (cov + cov.T)
    x_idx, y_idx, z_idx = (list(ix) for ix in (x_idx, y_idx, z_idx))
    if set(x_idx) & set(y_idx) or set(x_idx) & set(z_idx) or set(y_idx) & set(z_idx):
        raise ValueError("index blocks must be disjoint")

    def block(idx):
        return cov[np.ix_(idx, idx)]

    nats = 0.5 * (
        _chol_logdet(block(x_idx + z_idx))
        + _chol_logdet(block(y_idx + z_idx))
        - _chol_logdet(block(z_idx))
        - _chol_logdet(block(x_idx + y_idx + z_idx))
    )
    return max(nats / _LN2, 0.0)


@dataclass(frozen=True)
class StationaryCov:
    """Lag-indexed stationary autocovariance blocks of a stable network.

    ``gammas[h][i, j]`` = Cov(x_i at time t+h, x_j at time t); the lag-0
    block is symmetric positive semidefinite and Gamma(-h) = Gamma(h)^T.
    """

    labels: tuple
    gammas: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        gammas = tuple(np.asarray(g, dtype=np.float64) for g in self.gammas)
        for g in gammas:
            g.setflags(write=False)
        object.__setattr__(self, "gammas", gammas)

    @property
    def max_lag(self) -> int:
        return len(self.gammas) - 1

    def gamma(self, h: int) -> np.ndarray:
        if h >= 0:
            return self.gammas[h]
        return self.gammas[-h].T


def _as_coupling_spec(spec) -> LagCouplingSpec:
    if isinstance(spec, LinSysParams):
        return benchmark_coupling_spec(spec)
    if isinstance(spec, LagCouplingSpec):
        return spec
    raise TypeError(f"expected LinSysParams or LagCouplingSpec, got {type(spec)!r}")


def stationary_autocov(spec, max_lag: int) -> StationaryCov:
    """Exact stationary autocovariances Gamma(0..max_lag) of a stable
    network, from the companion-form discrete Lyapunov equation."""
    cspec = _as_coupling_spec(spec)
    mats = lag_matrices(cspec)
    n = cspec.n_processes
    p = len(mats)
    comp = np.zeros((n * p, n * p))
    for l, g in enumerate(mats):
        comp[:n, l * n : (l + 1) * n] = g
    if p > 1:
        comp[n:, : n * (p - 1)] = np.eye(n * (p - 1))
    if np.max(np.abs(np.linalg.eigvals(comp))) >= 1.0:
        raise UnstableError("system is not stable; no stationary covariance")
    q = np.zeros((n * p, n * p))
    q[:n, :n] = np.diag(np.square(cspec.noise_std))
    state_cov = solve_discrete_lyapunov(comp, q)
    state_cov = 0.5 * (state_cov + state_cov.T)
    gammas = [state_cov[:n, :n]]
    shifted = state_cov
    for _ in range(max_lag):
        shifted = comp @ shifted
        gammas.append(shifted[:n, :n])
    return StationaryCov(cspec.labels, tuple(gammas))


def joint_history_cov(
    cov: StationaryCov, source: ProcessId, target: ProcessId, history_len: int
) -> np.ndarray:
    """Covariance of [source past 1..L, target present, target past 1..L]."""
    L = history_len
    entries = [(source, -lag) for lag in range(1, L + 1)]
    entries.append((target, 0))
    entries.extend((target, -lag) for lag in range(1, L + 1))
    dim = len(entries)
    out = np.empty((dim, dim))
    for i, (pi, oi) in enumerate(entries):
        for j, (pj, oj) in enumerate(entries):
            h = oi - oj
            out[i, j] = cov.gamma(h)[pi, pj]
    return out


def exact_te_linear(
    spec, source: ProcessId, target: ProcessId, history_len: int
) -> float:
    """Exact Gaussian transfer entropy with truncated histories, in bits.

    Evaluates I(source past L; target present | target past L) from the
    stationary covariance. For the memoryless benchmark (a = b = 0) any
    L >= 4 gives the untruncated value.
    """
    if history_len < 1:
        raise ValueError("history_len must be >= 1")
    if source == target:
        raise ValueError("source and target must differ")
    cov = stationary_autocov(spec, history_len)
    joint = joint_history_cov(cov, source, target, history_len)
    L = history_len
    return gaussian_cmi_from_cov(
        joint,
        x_idx=range(0, L),
        y_idx=[L],
        z_idx=range(L + 1, 2 * L + 1),
    )
