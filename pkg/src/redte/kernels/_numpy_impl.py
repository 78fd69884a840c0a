"""Pure-numpy fallback for the brute-force max-norm neighbor kernels.

Chunked over query points to bound the broadcast distance block at a few
tens of megabytes. Bit-identical to the numba kernels.
"""

import numpy as np

_BLOCK_ELEMENTS = 4_000_000


def _chunk_size(m: int) -> int:
    return max(1, _BLOCK_ELEMENTS // max(m, 1))


def kth_radius_brute(points, k):
    """Distance to the k-th nearest neighbor (max-norm, self excluded)."""
    points = np.asarray(points, dtype=np.float64)
    m = points.shape[0]
    out = np.empty(m)
    step = _chunk_size(m)
    for start in range(0, m, step):
        stop = min(start + step, m)
        dists = np.max(np.abs(points[start:stop, None, :] - points[None, :, :]), axis=2)
        dists[np.arange(stop - start), np.arange(start, stop)] = np.inf
        out[start:stop] = np.partition(dists, k - 1, axis=1)[:, k - 1]
    return out


def ksg_counts_brute(points, source_dim, radii):
    """Strict counts in the three KSG marginal subspaces, chunked numpy.

    Same contract as the numba kernel: columns [source past (L), present
    (1), target past (L)], counts of other points strictly inside each
    point's radius in the source+past, present+past and past subspaces.
    """
    points = np.asarray(points, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    m = points.shape[0]
    left = source_dim
    n_xz = np.zeros(m, dtype=np.int64)
    n_yz = np.zeros(m, dtype=np.int64)
    n_z = np.zeros(m, dtype=np.int64)
    step = _chunk_size(m)
    for start in range(0, m, step):
        stop = min(start + step, m)
        diffs = np.abs(points[start:stop, None, :] - points[None, :, :])
        d_z = diffs[:, :, left + 1 :].max(axis=2)
        d_xz = np.maximum(d_z, diffs[:, :, :left].max(axis=2))
        d_yz = np.maximum(d_z, diffs[:, :, left])
        r = radii[start:stop, None]
        rows = np.arange(stop - start)
        cols = np.arange(start, stop)
        for dist, out in ((d_xz, n_xz), (d_yz, n_yz), (d_z, n_z)):
            inside = dist < r
            inside[rows, cols] = False
            out[start:stop] = inside.sum(axis=1)
    zero = radii <= 0.0
    n_xz[zero] = 0
    n_yz[zero] = 0
    n_z[zero] = 0
    return n_xz, n_yz, n_z


def strict_counts_brute(points, radii):
    """Number of other points strictly inside each point's radius (max-norm)."""
    points = np.asarray(points, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    m = points.shape[0]
    out = np.zeros(m, dtype=np.int64)
    step = _chunk_size(m)
    for start in range(0, m, step):
        stop = min(start + step, m)
        dists = np.max(np.abs(points[start:stop, None, :] - points[None, :, :]), axis=2)
        inside = dists < radii[start:stop, None]
        inside[np.arange(stop - start), np.arange(start, stop)] = False
        out[start:stop] = inside.sum(axis=1)
    out[radii <= 0.0] = 0
    return out
