"""Max-norm nearest-neighbor radii and strict-radius counts.

The joint-space k-th-neighbor search uses a k-d tree at 512 points or
more, a brute-force scan (numba or numpy, see ``redte.kernels``) below.
Both strategies share exact semantics, so they return identical results on
identical input; a test enforces this.

"Strict" counts use distance < radius, never <=; a point with zero radius
counts zero neighbors. The production path for the three KSG marginal
counts is a fused brute-force kernel (one scan, all three subspaces); the
``subspaces`` method recomputes them with three independent searches and
exists as the cross-check route.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from . import kernels

BRUTE_MAX_POINTS = 512


def _as_points(points) -> np.ndarray:
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d (n_points, dim) array")
    return pts


def _resolve(method: str, m: int) -> str:
    if method in ("tree", "brute"):
        return method
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return "brute" if m < BRUTE_MAX_POINTS else "tree"


def kth_neighbor_radius(points, k: int, method: str = "auto") -> np.ndarray:
    """Per-point distance to its k-th nearest neighbor, self excluded."""
    pts = _as_points(points)
    m = pts.shape[0]
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < n_points, got k={k}, n_points={m}")
    if _resolve(method, m) == "brute":
        return kernels.kth_radius_brute(pts, k)
    tree = cKDTree(pts)
    dists, _ = tree.query(pts, k=k + 1, p=np.inf, workers=-1)
    return np.ascontiguousarray(dists[:, k])


def strict_radius_counts(points, radii, method: str = "auto") -> np.ndarray:
    """Per-point count of other points at max-norm distance < radius."""
    pts = _as_points(points)
    radii = np.asarray(radii, dtype=np.float64)
    if radii.shape != (pts.shape[0],):
        raise ValueError("need one radius per point")
    if _resolve(method, pts.shape[0]) == "brute":
        return kernels.strict_counts_brute(pts, radii)
    tree = cKDTree(pts)
    # d < r is exactly d <= pred(r) in floats; the query includes the point
    # itself (distance 0) whenever r > 0.
    shrunk = np.nextafter(radii, -np.inf)
    counts = tree.query_ball_point(pts, shrunk, p=np.inf, workers=-1, return_length=True)
    counts = np.asarray(counts, dtype=np.int64) - 1
    counts[radii <= 0.0] = 0
    return counts


_FUSED_MAX_POINTS = 16384
_FUSED_MIN_DIM = 7


def ksg_marginal_counts(points, source_dim: int, radii, method: str = "auto"):
    """Strict counts in the three KSG subspaces of an embedded cloud.

    Columns of ``points`` are [source past (L), target present (1), target
    past (L)] with L = ``source_dim``. Returns (n_xz, n_yz, n_z) where xz
    is source+target past, yz present+target past, z target past alone.
    ``method='subspaces'`` recomputes each count with an independent
    search; results are identical by construction. The ``auto`` policy
    picks the fused scan where tree pruning degrades (high dimension,
    moderate size) and the per-subspace searches otherwise.
    """
    pts = _as_points(points)
    m, dim = pts.shape
    if not 1 <= source_dim or dim != 2 * source_dim + 1:
        raise ValueError("points must have 2 * source_dim + 1 columns")
    radii = np.asarray(radii, dtype=np.float64)
    if radii.shape != (m,):
        raise ValueError("need one radius per point")
    if method == "auto":
        fused = dim >= _FUSED_MIN_DIM and m < _FUSED_MAX_POINTS
        method = "fused" if fused else "subspaces"
    if method == "fused":
        return kernels.ksg_counts_brute(pts, source_dim, radii)
    if method == "subspaces":
        xz = np.ascontiguousarray(
            np.concatenate([pts[:, :source_dim], pts[:, source_dim + 1 :]], axis=1)
        )
        yz = np.ascontiguousarray(pts[:, source_dim:])
        z = np.ascontiguousarray(pts[:, source_dim + 1 :])
        return (
            strict_radius_counts(xz, radii),
            strict_radius_counts(yz, radii),
            strict_radius_counts(z, radii),
        )
    raise ValueError(f"unknown method {method!r}")
