from __future__ import annotations

import numpy as np
import pytest

from quadcodes.errors import SizeGuardExceeded
from quadcodes.linalg import inverse, nullspace, rank, rref, solve_left
from quadcodes.subspace import Subspace, enumerate_subspaces, gaussian_binomial, random_subspace


def test_gaussian_binomial_values():
    assert gaussian_binomial(2, 1, 3) == 4
    assert gaussian_binomial(5, 2, 3) == 1210
    assert gaussian_binomial(5, 0, 3) == 1
    assert gaussian_binomial(4, 5, 3) == 0


@pytest.mark.parametrize("s,k,p", [(2, 1, 3), (3, 1, 3), (4, 2, 3), (3, 2, 5), (5, 2, 3), (4, 0, 3), (4, 4, 3)])
def test_iterator_yields_each_subspace_once(s, k, p):
    seen = set()
    for H in enumerate_subspaces(s, k, p):
        assert H.dim == k
        # canonical: re-reducing the basis changes nothing
        assert Subspace.span(H.matrix, p, s) == H
        seen.add(H.basis)
    assert len(seen) == gaussian_binomial(s, k, p)


def test_iterator_guard():
    with pytest.raises(SizeGuardExceeded):
        enumerate_subspaces(8, 4, 5, max_subspaces=1000)


def test_zero_subspace():
    (H,) = list(enumerate_subspaces(4, 0, 3))
    assert H.dim == 0 and H.points().shape == (1, 4)


def test_points_of_subspace():
    H = Subspace.span([[1, 2, 0], [0, 0, 1]], 3, 3)
    pts = H.points()
    assert len({tuple(r) for r in pts}) == 9
    assert all(H.contains(r) for r in pts)
    assert not H.contains([0, 1, 0])


def test_linear_algebra_basics():
    rng = np.random.default_rng(1)
    for _ in range(30):
        M = rng.integers(0, 5, size=(4, 6))
        K = nullspace(M, 5)
        assert (M @ K.T % 5 == 0).all()
        assert K.shape[0] + rank(M, 5) == 6
        R, piv = rref(M, 5)
        assert (R[:, piv] == np.eye(len(piv), dtype=np.int64)).all()
    A = np.array([[1, 2], [3, 4]])
    assert (A @ inverse(A, 5) % 5 == np.eye(2, dtype=np.int64)).all()
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]], 5)


def test_solve_left_gives_lex_smallest():
    M = np.array([[1, 0], [1, 0], [0, 1]])
    c = np.array([2, 1])
    x = solve_left(M, c, 3)
    sols = [v for v in np.ndindex(3, 3, 3) if ((np.array(v) @ M - c) % 3 == 0).all()]
    assert tuple(x) == min(sols)
    assert solve_left(np.array([[1, 0], [2, 0]]), [0, 1], 3) is None


def test_random_subspace_has_full_rank():
    rng = np.random.default_rng(0)
    for k in range(5):
        assert random_subspace(rng, 4, k, 3).dim == k


def test_intersection_dim():
    A = Subspace.span([[1, 0, 0], [0, 1, 0]], 3, 3)
    B = Subspace.span([[0, 1, 0], [0, 0, 1]], 3, 3)
    assert A.intersection_dim(B) == 1
    assert (A + B).dim == 3
