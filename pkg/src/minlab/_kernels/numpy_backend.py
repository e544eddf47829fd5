"""Pure numpy/scipy implementations of the hot kernels."""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from ..errors import NumericalError

NAME = "numpy"


def flood_fill(neighbors, inside, seeds):
    """Connected triangles reachable from ``seeds`` through shared edges.

    neighbors : (T, 3) int32, -1 where there is no neighbor
    inside    : (T,) uint8 membership mask
    seeds     : (k,) int32 seed triangles (assumed inside)

    Returns a (T,) uint8 visited mask.  Frontier-at-a-time BFS; each
    sweep is vectorized.
    """
    visited = np.zeros(len(neighbors), dtype=np.uint8)
    inside = inside.astype(bool)
    frontier = np.unique(seeds)
    visited[frontier] = 1
    while frontier.size:
        nxt = neighbors[frontier].ravel()
        nxt = nxt[nxt >= 0]
        nxt = nxt[inside[nxt] & (visited[nxt] == 0)]
        frontier = np.unique(nxt)
        visited[frontier] = 1
    return visited


def pcg(indptr, indices, data, b, diag, x0, tol, maxiter):
    """Jacobi-preconditioned conjugate gradients on a CSR system.

    Returns (x, relative_residual, iterations).  Raises NumericalError
    when the iteration cap is reached without convergence.
    """
    n = len(b)
    a_mat = sp.csr_matrix((data, indices, indptr), shape=(n, n))
    inv_diag = np.where(diag > 0.0, 1.0 / np.where(diag > 0.0, diag, 1.0), 1.0)

    x = x0.copy()
    r = b - a_mat @ x
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        return np.zeros(n), 0.0, 0
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    relres = float(np.linalg.norm(r)) / norm_b
    it = 0
    while relres > tol and it < maxiter:
        q = a_mat @ p
        alpha = rz / float(p @ q)
        x += alpha * p
        r -= alpha * q
        z = inv_diag * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
        relres = float(np.linalg.norm(r)) / norm_b
        it += 1
    if relres > tol:
        raise NumericalError(
            f"conjugate gradients stalled at relative residual {relres:.3e} "
            f"after {it} iterations",
            residual=relres,
        )
    return x, relres, it


def link_segments(n_items, pair_a, pair_b):
    """Connected-component labels for ``n_items`` nodes joined by pairs."""
    if n_items == 0:
        return np.zeros(0, dtype=np.int64)
    graph = sp.coo_matrix(
        (np.ones(len(pair_a)), (pair_a, pair_b)), shape=(n_items, n_items)
    )
    _, labels = csgraph.connected_components(graph, directed=False)
    return labels.astype(np.int64)
