from __future__ import annotations

import numpy as np
import pytest

from quadcodes.cyclo import eta
from quadcodes.errors import NotInImage, NotQuadratic
from quadcodes.gf import make_field
from quadcodes.quadform import (
    BUILTIN_FORMS,
    builtin_form,
    construct_isotropic,
    construct_rank1,
    count_level_set,
    diagonalize,
    form_from_gram,
    form_from_json,
    form_to_json,
    isotropic_dim,
    level_set_formula,
    make_form,
    rank1_dim,
    restrict,
)
from quadcodes.subspace import Subspace, enumerate_subspaces, random_subspace

F81 = make_field(3, 4)
F27 = make_field(3, 3)


@pytest.mark.parametrize(
    "name,rank,sign",
    [
        ("trace_square", 4, -1),
        ("scaled_trace_square", 4, 1),
        # sign fixed by the level-set counts below
        ("trace_square_quarter", 3, -1),
        ("trace_linear_square", 1, 1),
        ("zero", 0, 1),
    ],
)
def test_rank_sign_gf81(name, rank, sign):
    f = builtin_form(name, F81)
    assert (f.rank, f.sign) == (rank, sign)
    assert f.radical.dim == 4 - rank


def test_quarter_form_sign_from_counting():
    # |f^-1(0)|, |f^-1(1)|, |f^-1(2)| fix the sign through the odd-rank count
    f = builtin_form("trace_square_quarter", F81)
    counts = np.bincount(f.table, minlength=3)
    assert list(counts) == [27, 36, 18]
    full = Subspace.full(3, 4)
    for beta in range(3):
        assert counts[beta] == level_set_formula(4, 3, -1, beta, 3)
        assert counts[beta] != level_set_formula(4, 3, 1, beta, 3) or beta == 0
    assert count_level_set(f, full, 1, "formula") == 36


def test_diagonalize_congruence():
    rng = np.random.default_rng(0)
    for _ in range(40):
        B = rng.integers(0, 5, size=(4, 4))
        A = (B + B.T) % 5
        lams, M = diagonalize(A, 5)
        D = M @ A @ M.T % 5
        assert (D == np.diag(np.diag(D))).all()
        assert sorted(int(x) for x in np.diag(D) if x) == sorted(lams)


def test_form_recovers_gram():
    f = builtin_form("trace_square", F81)
    X = F81.coords_table
    assert (np.einsum("ki,ij,kj->k", X, f.gram, X) % 3 == f.table).all()
    g = form_from_gram(F81, f.gram)
    assert (g.table == f.table).all()


def test_not_quadratic_reports_witness():
    with pytest.raises(NotQuadratic) as exc:
        make_form(F27, F27.trace_table)  # linear, fails homogeneity
    assert exc.value.witness is not None
    cubic = F27.trace_coords(F27.mul_coords(F27.mul_coords(F27.coords_table, F27.coords_table), F27.coords_table))
    with pytest.raises(NotQuadratic):
        make_form(make_field(5, 2), np.ones(25, dtype=np.int64))
    with pytest.raises(NotQuadratic):
        make_form(F27, cubic)


def test_bilinear_and_lf():
    f = builtin_form("scaled_trace_square", F27)
    rng = np.random.default_rng(3)
    for _ in range(30):
        x, y = (F27.element(int(i)) for i in rng.integers(0, 27, 2))
        assert f.bilinear(x, y) == (x * f.lf(y)).trace()
        assert (f(x + y) - f(x) - f(y)) % 3 == 2 * f.bilinear(x, y) % 3


@pytest.mark.parametrize("name", ["trace_square", "trace_square_quarter", "trace_linear_square"])
def test_solve_xb(name):
    f = builtin_form(name, F81)
    in_image, fxu = f.image_table
    assert in_image.sum() == 3 ** f.rank
    for b in F81.elements():
        if in_image[b.index]:
            xb = f.solve_xb(b)
            assert f.lf(xb) == -(b * F81(2).inv())
            assert f(xb) == fxu[b.index]
        else:
            with pytest.raises(NotInImage):
                f.solve_xb(b)


def test_level_sets_every_subspace_of_f27():
    f = builtin_form("trace_square", F27)
    assert f.rank == 3
    for k in range(4):
        for H in enumerate_subspaces(3, k, 3):
            for beta in range(3):
                assert count_level_set(f, H, beta) == count_level_set(f, H, beta, "formula")


@pytest.mark.parametrize("name", ["trace_square", "scaled_trace_square", "trace_square_quarter", "trace_linear_square"])
def test_level_sets_random_subspaces(name):
    f = builtin_form(name, F81)
    rng = np.random.default_rng(7)
    for _ in range(50):
        H = random_subspace(rng, 4, int(rng.integers(0, 5)), 3)
        for beta in range(3):
            assert count_level_set(f, H, beta) == count_level_set(f, H, beta, "formula")


@pytest.mark.parametrize("name,e0", [("trace_square", 1), ("scaled_trace_square", 2), ("trace_square_quarter", 2)])
def test_construct_isotropic(name, e0):
    f = builtin_form(name, F81)
    assert isotropic_dim(f.rank, f.sign, 4, 3) == e0
    J = construct_isotropic(f)
    assert J.dim == e0
    assert not f.values(J.points()).any()
    assert f.radical.is_subspace_of(J)


def test_isotropic_dimension_is_maximal():
    # no totally isotropic subspace of dimension e0 + 1 exists
    for name in ("trace_square", "scaled_trace_square", "trace_square_quarter"):
        f = builtin_form(name, F81)
        e0 = isotropic_dim(f.rank, f.sign, 4, 3)
        assert all(f.values(H.points()).any() for H in enumerate_subspaces(4, e0 + 1, 3))


@pytest.mark.parametrize("name", ["trace_square", "scaled_trace_square", "trace_square_quarter"])
@pytest.mark.parametrize("beta", [1, 2])
def test_construct_rank1(name, beta):
    f = builtin_form(name, F81)
    H = construct_rank1(f, beta)
    assert H.dim == rank1_dim(f.rank)
    assert restrict(f, H) == (1, eta(beta, 3))
    assert H.intersection_dim(f.radical) == 0


def test_form_json_round_trip():
    f = builtin_form("trace_square_quarter", F27)
    g = form_from_json(form_to_json(f))
    assert (g.table == f.table).all() and (g.rank, g.sign) == (f.rank, f.sign)


def test_sampled_validation_on_large_field():
    f = builtin_form("trace_square", make_field(3, 8))
    assert f.validation.startswith("sampled")
    assert f.rank == 8


def test_builtins_listed():
    assert set(BUILTIN_FORMS) >= {"trace_square", "scaled_trace_square", "trace_square_quarter", "trace_linear_square"}
    with pytest.raises(ValueError):
        builtin_form("square", F27)
