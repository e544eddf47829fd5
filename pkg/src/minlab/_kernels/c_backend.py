"""Adapter exposing the compiled kernels under the backend interface."""

import numpy as np

from ..errors import NumericalError
from .. import _ckern

NAME = "c"


def flood_fill(neighbors, inside, seeds):
    return _ckern.flood_fill(
        np.ascontiguousarray(neighbors, dtype=np.int32),
        np.ascontiguousarray(inside, dtype=np.uint8),
        np.ascontiguousarray(seeds, dtype=np.int32),
    )


def pcg(indptr, indices, data, b, diag, x0, tol, maxiter):
    x, relres, iters = _ckern.pcg(
        np.ascontiguousarray(indptr, dtype=np.int32),
        np.ascontiguousarray(indices, dtype=np.int32),
        np.ascontiguousarray(data, dtype=np.float64),
        np.ascontiguousarray(b, dtype=np.float64),
        np.ascontiguousarray(diag, dtype=np.float64),
        np.ascontiguousarray(x0, dtype=np.float64),
        float(tol),
        int(maxiter),
    )
    if relres > tol:
        raise NumericalError(
            f"conjugate gradients stalled at relative residual {relres:.3e} "
            f"after {iters} iterations",
            residual=relres,
        )
    return x, relres, iters


def link_segments(n_items, pair_a, pair_b):
    return _ckern.union_labels(
        int(n_items),
        np.ascontiguousarray(pair_a, dtype=np.int64),
        np.ascontiguousarray(pair_b, dtype=np.int64),
    )
