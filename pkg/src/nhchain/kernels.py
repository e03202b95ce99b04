"""Sparse matrix-vector kernels.

The COO matvec is the hot loop of every Krylov solve; everything else in the
package is either setup work or dense linear algebra delegated to LAPACK.
Two interchangeable implementations are provided:

* ``coo_matvec_numba`` -- a numba ``@njit`` loop (default when numba imports),
* ``coo_matvec_numpy`` -- a pure-numpy segment-sum fallback.

Setting the environment variable ``NHCHAIN_DISABLE_NUMBA=1`` forces the numpy
path; the flag is read on every dispatch so tests and benchmarks can toggle
it at runtime.  Both kernels require canonical COO data: entries sorted by
(row, col) with unique index pairs, as produced by
``operators.SparseOperator``.
"""

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    njit = None
    _HAVE_NUMBA = False

DISABLE_ENV = "NHCHAIN_DISABLE_NUMBA"


def numba_enabled() -> bool:
    """True when the numba kernel exists and is not disabled via the env flag."""
    return _HAVE_NUMBA and os.environ.get(DISABLE_ENV, "0").lower() not in (
        "1",
        "true",
        "yes",
    )


def coo_matvec_numpy(
    rows: np.ndarray, cols: np.ndarray, vals: np.ndarray, v: np.ndarray
) -> np.ndarray:
    """y = A @ v via per-row segment sums (rows must be sorted)."""
    out = np.zeros(v.shape[0], dtype=np.complex128)
    if rows.size == 0:
        return out
    prod = vals * v[cols]
    starts = np.flatnonzero(np.concatenate(([True], rows[1:] != rows[:-1])))
    out[rows[starts]] = np.add.reduceat(prod, starts)
    return out


if _HAVE_NUMBA:

    @njit(cache=True)
    def coo_matvec_numba(rows, cols, vals, v):  # pragma: no cover - jitted
        out = np.zeros(v.shape[0], dtype=np.complex128)
        for k in range(rows.shape[0]):
            out[rows[k]] += vals[k] * v[cols[k]]
        return out

else:  # pragma: no cover - environment without numba
    coo_matvec_numba = None


def coo_matvec(
    rows: np.ndarray, cols: np.ndarray, vals: np.ndarray, v: np.ndarray
) -> np.ndarray:
    """Dispatch to the numba kernel or the numpy fallback."""
    if numba_enabled():
        return coo_matvec_numba(rows, cols, vals, v)
    return coo_matvec_numpy(rows, cols, vals, v)
