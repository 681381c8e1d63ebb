"""Dense linear algebra over the prime field F_p.

Everything is exact integer arithmetic on numpy int64 arrays; matrices stay
small (cochain complexes of groups of order <= 32), so plain Gaussian
elimination is fine.
"""

from __future__ import annotations

import numpy as np


def _as_matrix(rows) -> np.ndarray:
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a


def rref(rows, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p. Returns (R, pivot column list);
    zero rows are dropped."""
    a = _as_matrix(rows) % p
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0), []
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(rows, p: int) -> int:
    return len(rref(rows, p)[1])


def reduce_vector(v, R: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Residual of v modulo the row space given in rref form.  The residual
    is the canonical coset representative (zeros in all pivot positions)."""
    v = np.asarray(v, dtype=np.int64) % p
    for i, c in enumerate(pivots):
        if v[c]:
            v = (v - v[c] * R[i]) % p
    return v


def in_row_space(v, R: np.ndarray, pivots: list[int], p: int) -> bool:
    return not reduce_vector(v, R, pivots, p).any()


def nullspace(rows, p: int) -> list[np.ndarray]:
    """Basis of the right nullspace in the standard rref parametrization,
    one vector per free column, in ascending free-column order."""
    a = _as_matrix(rows)
    if a.size == 0:
        ncols = a.shape[1] if a.ndim == 2 else 0
        return [np.eye(ncols, dtype=np.int64)[i] for i in range(ncols)]
    R, pivots = rref(a, p)
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-R[i, f]) % p
        basis.append(v)
    return basis


def solve(A, b, p: int):
    """One solution of A x = b mod p with free variables set to 0, or None."""
    A = _as_matrix(A) % p
    b = np.asarray(b, dtype=np.int64) % p
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    R, pivots = rref(aug, p)
    ncols = A.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, ncols]
    return x


def solve_affine(A, b, p: int):
    """All solutions of A x = b mod p as (particular, nullspace basis); None
    if inconsistent."""
    x0 = solve(A, b, p)
    if x0 is None:
        return None
    return x0, nullspace(A, p)
