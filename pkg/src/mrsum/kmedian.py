"""k-median clustering of 0/1 adjacency rows under the L1 distance.

Rows and centers are binary (the coordinate-wise median of 0/1 values is 0/1
with ties sent to 0), so the L1 distance reduces to a Hamming distance that
is evaluated with one matrix product per round.
"""

import numpy as np

from .summary import Partition
from .utils.validation import check_n_supernodes, check_rng

__all__ = ["kmedian_cluster", "kmedian_objective", "hamming_to_centers", "as_row_matrix"]


def as_row_matrix(rows):
    """Dense ``uint8`` matrix from an array or a sequence of ``AdjacencyRow``."""
    if isinstance(rows, np.ndarray):
        out = rows
    else:
        rows = list(rows)
        if rows and hasattr(rows[0], "to_dense"):
            out = np.stack([r.to_dense() for r in rows]) if rows else np.zeros((0, 0))
        else:
            out = np.asarray(rows)
    out = np.asarray(out)
    if out.ndim != 2:
        raise ValueError("rows must form a 2-d array")
    if out.size and not np.isin(out, (0, 1)).all():
        raise ValueError("rows must be 0/1 valued")
    return out.astype(np.uint8, copy=False)


def hamming_to_centers(X, centers, row_norm=None):
    """``(n, k)`` matrix of L1 distances between binary rows and centers."""
    Xf = X.astype(np.float32, copy=False)
    Cf = centers.astype(np.float32, copy=False)
    if row_norm is None:
        row_norm = Xf.sum(axis=1)
    # exact: all entries are integers far below 2**24
    d = row_norm[:, None] + Cf.sum(axis=1)[None, :] - 2.0 * (Xf @ Cf.T)
    return np.rint(d).astype(np.int64)


def _medians(X, labels, k):
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros((k, X.shape[1]), dtype=np.int64)
    np.add.at(sums, labels, X)
    # strict majority of ones; an even split goes to 0
    return (2 * sums > counts[:, None]).astype(np.uint8)


def kmedian_objective(X, labels):
    """Sum of L1 distances from each row to the median of its cluster."""
    X = as_row_matrix(X)
    labels = np.asarray(labels)
    k = int(labels.max()) + 1 if len(labels) else 0
    centers = _medians(X, labels, k)
    return int(np.abs(X.astype(np.int64) - centers[labels]).sum())


def _seed_centers(X, k, rng, row_norm):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    nearest = hamming_to_centers(X, X[chosen], row_norm)[:, 0]
    while len(chosen) < k:
        w = nearest.astype(np.float64)
        w[chosen] = 0.0
        if w.sum() > 0:
            nxt = int(rng.choice(n, p=w / w.sum()))
        else:
            # every remaining row duplicates a center
            rest = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rest[rng.integers(len(rest))])
        chosen.append(nxt)
        nearest = np.minimum(nearest, hamming_to_centers(X, X[[nxt]], row_norm)[:, 0])
    return X[chosen].copy()


def _fill_empty(labels, dist, k):
    """Give each empty cluster the worst-served row of a cluster with >= 2 rows."""
    counts = np.bincount(labels, minlength=k)
    own = dist[np.arange(len(labels)), labels]
    for j in np.flatnonzero(counts == 0):
        movable = counts[labels] >= 2
        score = np.where(movable, own, -1)
        i = int(np.argmax(score))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
        own[i] = 0
    return labels


def _single_run(X, k, rng, max_iter, row_norm):
    centers = _seed_centers(X, k, rng, row_norm)
    labels = None
    for _ in range(max_iter):
        dist = hamming_to_centers(X, centers, row_norm)
        new = _fill_empty(np.argmin(dist, axis=1), dist, k)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        centers = _medians(X, labels, k)
    obj = int(np.abs(X.astype(np.int64) - centers[labels]).sum())
    return labels, obj


def kmedian_cluster(rows, k, seed=None, n_init=5, max_iter=50):
    """Partition ``rows`` into exactly ``k`` clusters by L1 k-median.

    Centers start from distance-weighted seeding, then assignment (nearest
    center, lowest index on ties) and median updates alternate until the
    assignment is stable or ``max_iter`` rounds have run.  The best of
    ``n_init`` seeded restarts is returned.

    Parameters
    ----------
    rows : array-like of shape (n, d) or sequence of AdjacencyRow
    k : int
        Number of clusters, ``1 <= k <= n``.
    seed : int, Generator or None

    Returns
    -------
    Partition
    """
    X = as_row_matrix(rows)
    n = X.shape[0]
    k = check_n_supernodes(k, n)
    if n_init < 1 or max_iter < 1:
        raise ValueError("n_init and max_iter must be positive")
    rng = check_rng(seed)
    if k == n:
        return Partition.identity(n)
    row_norm = X.sum(axis=1, dtype=np.int64).astype(np.float32)
    best, best_obj = None, None
    for _ in range(n_init):
        labels, obj = _single_run(X, k, rng, max_iter, row_norm)
        if best_obj is None or obj < best_obj:
            best, best_obj = labels, obj
    return Partition(best)
