"""Dense linear algebra over F_p on int64 numpy arrays.

Vectors are rows.  Every routine reduces its output into [0, p).
"""

from __future__ import annotations

import numpy as np


def as_matrix(M, ncols=None) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else np.zeros((0, ncols or 0), dtype=np.int64)
    if M.size == 0 and ncols is not None:
        M = np.zeros((M.shape[0], ncols), dtype=np.int64)
    return M


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with zero rows dropped, and the pivot columns."""
    A = as_matrix(M) % p
    A = A.copy()
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        A = (A - np.outer(col, A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def nullspace(M, p: int, ncols=None) -> np.ndarray:
    """Basis (in RREF) of {x : M @ x = 0}."""
    M = as_matrix(M, ncols)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = -R[i, fc] % p
    if basis.shape[0] == 0:
        return basis
    return rref(basis, p)[0]


def inverse(M, p: int) -> np.ndarray:
    M = as_matrix(M) % p
    n = M.shape[0]
    R, piv = rref(np.hstack([M, np.eye(n, dtype=np.int64)]), p)
    if len(piv) < n or piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod p")
    return R[:, n:] % p


def solve_left(M, c, p: int):
    """Lexicographically smallest x with x @ M = c, or None if unsolvable.

    The smallest solution is the one with zeros at the pivot columns of the
    kernel's RREF basis.
    """
    M = as_matrix(M) % p
    c = np.asarray(c, dtype=np.int64) % p
    rows = M.shape[0]
    # x @ M = c  <=>  M.T @ x = c
    aug = np.hstack([M.T, c.reshape(-1, 1)])
    R, piv = rref(aug, p)
    if rows in piv:
        return None
    x = np.zeros(rows, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, rows]
    K = nullspace(M.T, p, ncols=rows)
    return reduce_against(x, K, p)


def reduce_against(v, basis, p: int) -> np.ndarray:
    """Reduce v modulo the row space of an RREF basis (zeros at its pivots)."""
    v = np.asarray(v, dtype=np.int64) % p
    v = v.copy()
    for row in as_matrix(basis, v.shape[-1]):
        nz = np.nonzero(row)[0]
        if nz.size:
            pc = nz[0]
            v = (v - v[..., pc:pc + 1] * row) % p
    return v


def digits(indices, p: int, width: int) -> np.ndarray:
    """Base-p digits, most significant first: the lex-ordered vectors of F_p^width."""
    idx = np.asarray(indices, dtype=np.int64)
    w = p ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[..., None] // w) % p


def matmul_mod(A, B, p: int) -> np.ndarray:
    """A @ B mod p; routed through float64 BLAS when the entries stay exact."""
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < 2**52:
        out = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return np.fmod(out, p).astype(np.int64)
    return np.matmul(A.astype(np.int64), B.astype(np.int64)) % p
