"""Numba-jitted brute-force max-norm neighbor kernels.

Both kernels exclude the query point itself and run the scan with an
early-exit over dimensions, which in max-norm prunes most candidates
after one or two coordinates. Results are exact (plain float compares and
integer counts), so they are bit-identical to the numpy fallback and
independent of the thread count.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def kth_radius_brute(points, k):
    """Distance to the k-th nearest neighbor (max-norm, self excluded)."""
    m, dim = points.shape
    out = np.empty(m)
    for i in prange(m):
        best = np.full(k, np.inf)
        bound = np.inf
        for j in range(m):
            if j == i:
                continue
            dist = 0.0
            ok = True
            for t in range(dim):
                diff = abs(points[i, t] - points[j, t])
                if diff > dist:
                    dist = diff
                    if dist >= bound:
                        ok = False
                        break
            if ok and dist < bound:
                pos = k - 1
                while pos > 0 and best[pos - 1] > dist:
                    best[pos] = best[pos - 1]
                    pos -= 1
                best[pos] = dist
                bound = best[k - 1]
        out[i] = best[k - 1]
    return out


@njit(cache=True, parallel=True)
def ksg_counts_brute(points, source_dim, radii):
    """Strict counts in the three KSG marginal subspaces, one fused pass.

    ``points`` columns are [source past (L), target present (1), target
    past (L)]; subspaces are source+target past, present+target past, and
    target past alone. The target-past distance lower-bounds the other two,
    so one early exit prunes all three counts.
    """
    m, dim = points.shape
    left = source_dim
    mid = source_dim  # column index of the present value
    n_xz = np.zeros(m, dtype=np.int64)
    n_yz = np.zeros(m, dtype=np.int64)
    n_z = np.zeros(m, dtype=np.int64)
    for i in prange(m):
        r = radii[i]
        if r <= 0.0:
            continue
        cxz = 0
        cyz = 0
        cz = 0
        for j in range(m):
            if j == i:
                continue
            dz = 0.0
            for t in range(mid + 1, dim):
                diff = abs(points[i, t] - points[j, t])
                if diff > dz:
                    dz = diff
                    if dz >= r:
                        break
            if dz >= r:
                continue
            cz += 1
            dxz = dz
            for t in range(left):
                diff = abs(points[i, t] - points[j, t])
                if diff > dxz:
                    dxz = diff
                    if dxz >= r:
                        break
            if dxz < r:
                cxz += 1
            # dz < r already, so max(dz, present diff) < r iff the present
            # coordinate is within r
            if abs(points[i, mid] - points[j, mid]) < r:
                cyz += 1
        n_xz[i] = cxz
        n_yz[i] = cyz
        n_z[i] = cz
    return n_xz, n_yz, n_z


@njit(cache=True, parallel=True)
def strict_counts_brute(points, radii):
    """Number of other points strictly inside each point's radius (max-norm)."""
    m, dim = points.shape
    out = np.zeros(m, dtype=np.int64)
    for i in prange(m):
        r = radii[i]
        if r <= 0.0:
            out[i] = 0
            continue
        n = 0
        for j in range(m):
            if j == i:
                continue
            inside = True
            for t in range(dim):
                if abs(points[i, t] - points[j, t]) >= r:
                    inside = False
                    break
            if inside:
                n += 1
        out[i] = n
    return out
