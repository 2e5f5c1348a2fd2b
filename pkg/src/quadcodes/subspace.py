"""F_p-subspaces of F_p^s in canonical reduced row-echelon form, and their enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import SizeGuardExceeded
from .linalg import as_matrix, digits, rank, reduce_against, rref

DEFAULT_MAX_SUBSPACES = 10**7


def gaussian_binomial(s: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^s."""
    if k < 0 or k > s:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (s - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class Subspace:
    p: int
    ambient_dim: int
    basis: tuple  # rows of the RREF basis, each a tuple of ints

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int) -> Subspace:
        M = as_matrix(vectors, ambient_dim)
        if M.shape[0] == 0:
            return cls.zero(p, ambient_dim)
        R, _ = rref(M, p)
        return cls(p, ambient_dim, tuple(tuple(int(c) for c in row) for row in R))

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> Subspace:
        return cls(p, ambient_dim, ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> Subspace:
        return cls.span(np.eye(ambient_dim, dtype=np.int64), p, ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.ambient_dim)

    @property
    def pivots(self) -> list[int]:
        return [next(i for i, c in enumerate(row) if c) for row in self.basis]

    def contains(self, v) -> bool:
        return not reduce_against(v, self.matrix, self.p).any()

    def points(self) -> np.ndarray:
        """All p^dim vectors, ordered by their lex-ordered coefficient vectors."""
        if self.dim == 0:
            return np.zeros((1, self.ambient_dim), dtype=np.int64)
        c = digits(np.arange(self.p**self.dim), self.p, self.dim)
        return c @ self.matrix % self.p

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(np.vstack([self.matrix, other.matrix]), self.p, self.ambient_dim)

    def intersection_dim(self, other: Subspace) -> int:
        return self.dim + other.dim - (self + other).dim

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(row) for row in self.basis)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.basis]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.rows()})"


class SubspaceIterator:
    """Every k-dimensional subspace of F_p^s exactly once, as RREF bases.

    Order: pivot patterns in ``itertools.combinations`` order, then the free
    entries in lexicographic order.  ``blocks()`` yields the same sequence as
    stacked (b, k, s) arrays, one pivot pattern (or slice of one) at a time.
    """

    def __init__(self, s: int, k: int, p: int, *, max_subspaces: int = DEFAULT_MAX_SUBSPACES):
        if not 0 <= k <= s:
            raise ValueError(f"need 0 <= k <= s, got k={k}, s={s}")
        self.s, self.k, self.p = s, k, p
        self.count = gaussian_binomial(s, k, p)
        if self.count > max_subspaces:
            raise SizeGuardExceeded(f"[{s},{k}]_{p} subspaces", self.count, max_subspaces)

    def __len__(self):
        return self.count

    def patterns(self):
        """(pivots, free positions) per pivot pattern."""
        for piv in itertools.combinations(range(self.s), self.k):
            free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, self.s) if c not in piv]
            yield piv, free

    def blocks(self, max_block: int = 4096) -> Iterator[np.ndarray]:
        s, k, p = self.s, self.k, self.p
        if k == 0:
            yield np.zeros((1, 0, s), dtype=np.int64)
            return
        for piv, free in self.patterns():
            template = np.zeros((k, s), dtype=np.int64)
            for i, pc in enumerate(piv):
                template[i, pc] = 1
            total = p ** len(free)
            rows = np.array([f[0] for f in free], dtype=np.int64)
            cols = np.array([f[1] for f in free], dtype=np.int64)
            for start in range(0, total, max_block):
                stop = min(total, start + max_block)
                block = np.broadcast_to(template, (stop - start, k, s)).copy()
                if free:
                    vals = digits(np.arange(start, stop), p, len(free))
                    block[:, rows, cols] = vals
                yield block

    def __iter__(self) -> Iterator[Subspace]:
        for block in self.blocks():
            for B in block:
                yield Subspace(self.p, self.s, tuple(tuple(int(c) for c in row) for row in B))


def enumerate_subspaces(s: int, k: int, p: int, **kw) -> SubspaceIterator:
    return SubspaceIterator(s, k, p, **kw)


def random_subspace(rng: np.random.Generator, s: int, k: int, p: int) -> Subspace:
    """A uniformly drawn spanning set, resampled until it has full rank k."""
    while True:
        M = rng.integers(0, p, size=(k, s))
        if rank(M, p) == k:
            return Subspace.span(M, p, s)
