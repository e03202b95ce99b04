"""Pauli algebra and sparse operators on the 2**N spin-1/2 chain space.

Basis convention
----------------
Basis index ``i`` carries bits ``b_{N-1} ... b_0``; chain site ``n``
(1-based) maps to bit position ``N - n``, so site 1 is the most significant
bit.  Spin up is bit value 0 and spin down is bit value 1.  For N = 2 the
ordering is therefore ``(uu, ud, du, dd)``.

The raising/lowering operators carry the conventional 1/2 normalization,
``plus = (x + i y) / 2``, so that a pair coupling of strength J contributes
matrix elements equal to J.

State vectors are plain 1-D complex numpy arrays of length ``2**N``.
All operators are immutable after construction and safe to share.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .kernels import coo_matvec

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "plus": np.array([[0, 1], [0, 0]], dtype=np.complex128),
    "minus": np.array([[0, 0], [1, 0]], dtype=np.complex128),
    "identity": np.eye(2, dtype=np.complex128),
}

for _m in PAULI.values():
    _m.setflags(write=False)


def pauli(label: str) -> np.ndarray:
    """Return the 2x2 matrix for a label in {x, y, z, plus, minus, identity}."""
    try:
        return PAULI[label]
    except KeyError:
        raise ValueError(
            f"unknown operator label {label!r}; expected one of {sorted(PAULI)}"
        ) from None


def _canonical(dim, rows, cols, vals):
    """Sort by (row, col), merge duplicates, drop exact zeros, freeze arrays."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    vals = np.ascontiguousarray(vals, dtype=np.complex128)
    if not (rows.shape == cols.shape == vals.shape) or rows.ndim != 1:
        raise ValueError("rows, cols and vals must be 1-D arrays of equal length")
    if rows.size:
        if rows.min() < 0 or rows.max() >= dim or cols.min() < 0 or cols.max() >= dim:
            raise ValueError(f"index out of range for dimension {dim}")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        fresh = np.concatenate(
            ([True], (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1]))
        )
        starts = np.flatnonzero(fresh)
        if starts.size != rows.size:
            vals = np.add.reduceat(vals, starts)
            rows, cols = rows[starts], cols[starts]
        keep = vals != 0
        if not keep.all():
            rows, cols, vals = rows[keep], cols[keep], vals[keep]
    for arr in (rows, cols, vals):
        arr.setflags(write=False)
    return rows, cols, vals


@dataclass(frozen=True)
class SparseOperator:
    """Complex sparse matrix in canonical COO form.

    Entries are sorted by (row, col) with unique index pairs and no stored
    zeros, which makes equality of equal operators an array comparison.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @classmethod
    def from_entries(cls, dim: int, rows, cols, vals) -> "SparseOperator":
        if dim <= 0:
            raise ValueError("dimension must be positive")
        return cls(dim, *_canonical(dim, rows, cols, vals))

    @property
    def nnz(self) -> int:
        return self.rows.size

    @property
    def entries(self) -> list[tuple[int, int, complex]]:
        """Canonical (row, col, value) triples."""
        return [
            (int(r), int(c), complex(v))
            for r, c, v in zip(self.rows, self.cols, self.vals)
        ]

    def dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        out[self.rows, self.cols] = self.vals
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return op_matvec(self, v)

    def conj_transpose(self) -> "SparseOperator":
        return SparseOperator.from_entries(
            self.dim, self.cols, self.rows, self.vals.conj()
        )

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return op_add(self, other)

    def __rmul__(self, c: complex) -> "SparseOperator":
        return op_scale(c, self)

    def __matmul__(self, v: np.ndarray) -> np.ndarray:
        return op_matvec(self, v)


def identity_op(dim: int) -> SparseOperator:
    idx = np.arange(dim, dtype=np.int64)
    return SparseOperator.from_entries(dim, idx, idx, np.ones(dim, dtype=np.complex128))


def zero_op(dim: int) -> SparseOperator:
    empty = np.zeros(0)
    return SparseOperator.from_entries(dim, empty, empty, empty)


def _check_site(site: int, N: int) -> None:
    if not 1 <= site <= N:
        raise ValueError(f"site {site} outside chain of {N} sites")


def embed(op: np.ndarray, site: int, N: int) -> SparseOperator:
    """Embed a 2x2 matrix at a tensor slot: I (x) ... (x) op (x) ... (x) I.

    ``site`` follows the 1-based convention of the module docstring: site 1
    occupies the most significant bit of the basis index.
    """
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (2, 2):
        raise ValueError("embed expects a 2x2 matrix")
    _check_site(site, N)
    dim = 1 << N
    pos = N - site
    half = np.arange(dim >> 1, dtype=np.int64)
    low = half & ((1 << pos) - 1)
    high = half >> pos
    rows, cols, vals = [], [], []
    for a in range(2):
        for b in range(2):
            if op[a, b] == 0:
                continue
            col = (high << (pos + 1)) | (b << pos) | low
            row = col ^ ((a ^ b) << pos)
            rows.append(row)
            cols.append(col)
            vals.append(np.full(col.shape, op[a, b], dtype=np.complex128))
    if not rows:
        return zero_op(dim)
    return SparseOperator.from_entries(
        dim, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


def embed_pair(op4: np.ndarray, site_a: int, site_b: int, N: int) -> SparseOperator:
    """Embed a 4x4 two-site matrix at sites ``site_a < site_b``.

    The 4x4 index convention is ``kron(A, B)`` with A acting on ``site_a``
    (the higher bit of the two-site index) and B on ``site_b``.
    """
    op4 = np.asarray(op4, dtype=np.complex128)
    if op4.shape != (4, 4):
        raise ValueError("embed_pair expects a 4x4 matrix")
    _check_site(site_a, N)
    _check_site(site_b, N)
    if site_a >= site_b:
        raise ValueError("embed_pair requires site_a < site_b")
    dim = 1 << N
    p_hi = N - site_a
    p_lo = N - site_b
    quarter = np.arange(dim >> 2, dtype=np.int64)
    low = quarter & ((1 << p_lo) - 1)
    mid = (quarter >> p_lo) & ((1 << (p_hi - 1 - p_lo)) - 1)
    high = quarter >> (p_hi - 1)
    base = (high << (p_hi + 1)) | (mid << (p_lo + 1)) | low
    rows, cols, vals = [], [], []
    for a in range(4):
        for b in range(4):
            if op4[a, b] == 0:
                continue
            col = base | ((b >> 1) << p_hi) | ((b & 1) << p_lo)
            row = col ^ ((((a ^ b) >> 1) << p_hi) | (((a ^ b) & 1) << p_lo))
            rows.append(row)
            cols.append(col)
            vals.append(np.full(col.shape, op4[a, b], dtype=np.complex128))
    if not rows:
        return zero_op(dim)
    return SparseOperator.from_entries(
        dim, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


def _check_same_dim(a: SparseOperator, b: SparseOperator) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def op_add(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    _check_same_dim(a, b)
    return SparseOperator.from_entries(
        a.dim,
        np.concatenate((a.rows, b.rows)),
        np.concatenate((a.cols, b.cols)),
        np.concatenate((a.vals, b.vals)),
    )


def op_sum(ops: list[SparseOperator]) -> SparseOperator:
    """Sum a list of operators with a single canonicalization pass."""
    if not ops:
        raise ValueError("op_sum of an empty list")
    dim = ops[0].dim
    for o in ops[1:]:
        if o.dim != dim:
            raise ValueError(f"dimension mismatch: {dim} vs {o.dim}")
    return SparseOperator.from_entries(
        dim,
        np.concatenate([o.rows for o in ops]),
        np.concatenate([o.cols for o in ops]),
        np.concatenate([o.vals for o in ops]),
    )


def op_scale(c: complex, a: SparseOperator) -> SparseOperator:
    return SparseOperator.from_entries(a.dim, a.rows, a.cols, complex(c) * a.vals)


def op_matvec(a: SparseOperator, v: np.ndarray) -> np.ndarray:
    v = np.ascontiguousarray(v, dtype=np.complex128)
    if v.shape != (a.dim,):
        raise ValueError(f"vector shape {v.shape} does not match dimension {a.dim}")
    return coo_matvec(a.rows, a.cols, a.vals, v)


def kron_chain(mats: list[np.ndarray]) -> np.ndarray:
    """Dense Kronecker product of a list of matrices (site 1 first)."""
    return reduce(np.kron, mats)
