# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: flood fill, PCG, union-find segment linking."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def flood_fill(int[:, ::1] neighbors, unsigned char[::1] inside, int[::1] seeds):
    cdef Py_ssize_t n = neighbors.shape[0]
    visited_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] visited = visited_arr
    stack_arr = np.empty(n, dtype=np.int32)
    cdef int[::1] stack = stack_arr
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t i
    cdef int t, nb, k

    for i in range(seeds.shape[0]):
        t = seeds[i]
        if not visited[t]:
            visited[t] = 1
            stack[top] = t
            top += 1
    while top > 0:
        top -= 1
        t = stack[top]
        for k in range(3):
            nb = neighbors[t, k]
            if nb >= 0 and inside[nb] and not visited[nb]:
                visited[nb] = 1
                stack[top] = nb
                top += 1
    return visited_arr


def pcg(int[::1] indptr, int[::1] indices, double[::1] data,
        double[::1] b, double[::1] diag, double[::1] x0,
        double tol, long maxiter):
    cdef Py_ssize_t n = b.shape[0]
    x_arr = x0.copy()
    cdef double[::1] x = x_arr
    r_arr = np.empty(n)
    z_arr = np.empty(n)
    p_arr = np.empty(n)
    q_arr = np.empty(n)
    inv_arr = np.empty(n)
    cdef double[::1] r = r_arr, z = z_arr, p = p_arr, q = q_arr, inv_diag = inv_arr
    cdef Py_ssize_t i, j
    cdef double s, norm_b, rz, rz_new, alpha, beta, rr, relres
    cdef long it = 0

    norm_b = 0.0
    for i in range(n):
        inv_diag[i] = 1.0 / diag[i] if diag[i] > 0.0 else 1.0
        norm_b += b[i] * b[i]
    norm_b = sqrt(norm_b)
    if norm_b == 0.0:
        return np.zeros(n), 0.0, 0

    rr = 0.0
    rz = 0.0
    for i in range(n):
        s = 0.0
        for j in range(indptr[i], indptr[i + 1]):
            s += data[j] * x[indices[j]]
        r[i] = b[i] - s
        z[i] = inv_diag[i] * r[i]
        p[i] = z[i]
        rz += r[i] * z[i]
        rr += r[i] * r[i]
    relres = sqrt(rr) / norm_b

    while relres > tol and it < maxiter:
        s = 0.0
        for i in range(n):
            q[i] = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                q[i] += data[j] * p[indices[j]]
            s += p[i] * q[i]
        alpha = rz / s
        rz_new = 0.0
        rr = 0.0
        for i in range(n):
            x[i] += alpha * p[i]
            r[i] -= alpha * q[i]
            z[i] = inv_diag[i] * r[i]
            rz_new += r[i] * z[i]
            rr += r[i] * r[i]
        beta = rz_new / rz
        for i in range(n):
            p[i] = z[i] + beta * p[i]
        rz = rz_new
        relres = sqrt(rr) / norm_b
        it += 1
    return x_arr, relres, it


def union_labels(long n_items, long[::1] pair_a, long[::1] pair_b):
    """Connected-component labels (canonical: by first node occurrence)."""
    parent_arr = np.arange(n_items, dtype=np.int64)
    cdef long[::1] parent = parent_arr
    cdef Py_ssize_t k
    cdef long a, b, ra, rb

    for k in range(pair_a.shape[0]):
        ra = pair_a[k]
        while parent[ra] != ra:
            parent[ra] = parent[parent[ra]]
            ra = parent[ra]
        rb = pair_b[k]
        while parent[rb] != rb:
            parent[rb] = parent[parent[rb]]
            rb = parent[rb]
        if ra < rb:
            parent[rb] = ra
        elif rb < ra:
            parent[ra] = rb

    labels_arr = np.empty(n_items, dtype=np.int64)
    cdef long[::1] labels = labels_arr
    cdef long next_label = 0, root
    count_arr = np.full(n_items, -1, dtype=np.int64)
    cdef long[::1] canon = count_arr
    for k in range(n_items):
        root = k
        while parent[root] != root:
            root = parent[root]
        a = k
        while parent[a] != root:
            b = parent[a]
            parent[a] = root
            a = b
        if canon[root] < 0:
            canon[root] = next_label
            next_label += 1
        labels[k] = canon[root]
    return labels_arr
