"""Quadratic forms f: GF(p^m) -> F_p.

A form is ingested as a full evaluation table, indexed in the field's
coordinate-lexicographic element order, and validated against the
quadratic-form axioms.  From it we derive the Gram matrix A with
f(X) = X A X^T, the rank and sign, the matrix of the linearized map L_f
(F(x, y) = Tr(x L_f(y))) and its kernel, the radical.

Vectors are rows throughout: coords(L_f(y)) = coords(y) @ lf_matrix.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .cyclo import eta, upsilon
from .errors import InternalSearchFailure, NotInImage, NotQuadratic
from .gf import ExtensionField, FieldElement, primitive_element
from .linalg import inverse, matmul_mod, nullspace, reduce_against, rref, solve_left
from .subspace import Subspace

EXHAUSTIVE_LIMIT = 4096
SAMPLE_SIZE = 10_000

BUILTIN_FORMS = (
    "trace_square",
    "scaled_trace_square",
    "trace_square_quarter",
    "trace_linear_square",
    "square",
    "zero",
)


def diagonalize(A, p: int) -> tuple[list[int], np.ndarray]:
    """Symmetric congruence diagonalization over F_p (p odd).

    Returns the nonzero diagonal entries lambda_1..lambda_R and an invertible
    M with M A M^T = diag(lambda_1, ..., lambda_R, 0, ..., 0).
    """
    A = np.array(A, dtype=np.int64) % p
    n = A.shape[0]
    M = np.eye(n, dtype=np.int64)

    def swap(i, j):
        A[[i, j]] = A[[j, i]]
        A[:, [i, j]] = A[:, [j, i]]
        M[[i, j]] = M[[j, i]]

    lams = []
    for k in range(n):
        sub = A[k:, k:]
        if not sub.any():
            break
        diag = np.nonzero(np.diag(sub))[0]
        if diag.size == 0:
            # zero diagonal but some a_ij != 0: fold row/col j into i,
            # giving a_ii = 2 a_ij != 0 since p is odd
            i, j = (int(t) + k for t in np.argwhere(sub)[0])
            A[i] = (A[i] + A[j]) % p
            A[:, i] = (A[:, i] + A[:, j]) % p
            M[i] = (M[i] + M[j]) % p
            piv = i
        else:
            piv = int(diag[0]) + k
        if piv != k:
            swap(piv, k)
        a = int(A[k, k])
        inv_a = pow(a, -1, p)
        for i in range(k + 1, n):
            c = int(A[i, k]) * inv_a % p
            if c:
                A[i] = (A[i] - c * A[k]) % p
                A[:, i] = (A[:, i] - c * A[:, k]) % p
                M[i] = (M[i] - c * M[k]) % p
        lams.append(a)
    return lams, M


def sign_of(lams, p: int) -> int:
    delta = 1
    for lam in lams:
        delta = delta * lam % p
    return eta(delta, p)


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    field: ExtensionField
    table: np.ndarray
    gram: np.ndarray
    rank: int
    sign: int
    lf_matrix: np.ndarray
    radical: Subspace
    validation: str
    name: str = dc_field(default="custom")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return self.field.m

    def __call__(self, x) -> int:
        if isinstance(x, FieldElement):
            return int(self.table[x.index])
        return int(self.table[int(self.field.index(x))])

    def values(self, X) -> np.ndarray:
        """Vectorized evaluation on coordinate rows."""
        return self.table[self.field.index(X)]

    def bilinear(self, x: FieldElement, y: FieldElement) -> int:
        p = self.p
        return (self(x + y) - self(x) - self(y)) * pow(2, -1, p) % p

    def lf(self, y: FieldElement) -> FieldElement:
        return self.field.from_coords(y.coords() @ self.lf_matrix % self.p)

    def solve_xb(self, b: FieldElement) -> FieldElement:
        """Lexicographically smallest x with L_f(x) = -b/2; NotInImage if there is none."""
        p = self.p
        target = (-b.coords() * pow(2, -1, p)) % p
        x = solve_left(self.lf_matrix, target, p)
        if x is None:
            raise NotInImage(f"{b!r} is not in Im(L_f)")
        return self.field.from_coords(x)

    @functools.cached_property
    def image_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(in_image, f(x_u)) for every u in element-index order; f(x_u) is -1 off the image."""
        F = self.field
        X = F.coords_table
        U = (-2 * matmul_mod(X, self.lf_matrix, self.p)) % self.p
        idx = F.index(U)
        fxu = np.full(F.q, -1, dtype=np.int64)
        fxu[idx] = self.table
        return fxu >= 0, fxu

    def describe(self) -> dict:
        return {
            "name": self.name,
            "field": self.field.descriptor(),
            "rank": self.rank,
            "sign": self.sign,
            "gram": self.gram.tolist(),
            "lf_matrix": self.lf_matrix.tolist(),
            "radical_basis": self.radical.rows(),
            "validation": self.validation,
        }


def _pairs_ok(F: ExtensionField, table, A, xs, ys):
    """Indices where F(x, y) != X A Y^T for index arrays xs, ys (broadcast)."""
    p = F.p
    X = F.coords_table[xs]
    Y = F.coords_table[ys]
    s = table[F.index((X + Y) % p)]
    lhs = (s - table[xs] - table[ys]) * pow(2, -1, p) % p
    rhs = np.einsum("...i,ij,...j->...", X, A, Y) % p
    return lhs == rhs


def make_form(field: ExtensionField, values, *, seed: int = 0, name: str = "custom") -> QuadraticForm:
    """Validate an evaluation table (or callable on elements) and derive the form data."""
    F = field
    p, q, m = F.p, F.q, F.m
    if callable(values):
        table = np.array([_as_fp(values(x), p) for x in F.elements()], dtype=np.int64)
    else:
        table = np.asarray(values, dtype=np.int64).reshape(-1)
        if table.shape[0] != q:
            raise ValueError(f"table has {table.shape[0]} entries, field has {q}")
        table = table % p
    table.setflags(write=False)

    exhaustive = q <= EXHAUSTIVE_LIMIT
    rng = np.random.default_rng(seed)
    X = F.coords_table

    # f(cx) = c^2 f(x)
    if exhaustive:
        for c in range(p):
            bad = table[F.index(c * X % p)] != c * c * table % p
            if bad.any():
                i = int(np.argmax(bad))
                raise NotQuadratic("f(cx) != c^2 f(x)", (c, tuple(X[i])))
    else:
        cs = rng.integers(0, p, SAMPLE_SIZE)
        xs = rng.integers(0, q, SAMPLE_SIZE)
        bad = table[F.index(cs[:, None] * X[xs] % p)] != cs * cs * table[xs] % p
        if bad.any():
            i = int(np.argmax(bad))
            raise NotQuadratic("f(cx) != c^2 f(x)", (int(cs[i]), tuple(X[xs[i]])))

    inv2 = pow(2, -1, p)
    basis_idx = [int(F.index(np.eye(m, dtype=np.int64)[i])) for i in range(m)]
    A = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            e = np.zeros(m, dtype=np.int64)
            e[i] += 1
            e[j] += 1
            A[i, j] = (table[F.index(e % p)] - table[basis_idx[i]] - table[basis_idx[j]]) * inv2 % p

    # F(x, y) = X A Y^T, i.e. the polarization is bilinear with Gram matrix A
    if exhaustive:
        ys = np.arange(q)
        step = max(1, 2**20 // q)
        for start in range(0, q, step):
            xs = np.arange(start, min(q, start + step))
            ok = _pairs_ok(F, table, A, xs[:, None], ys[None, :])
            if not ok.all():
                i, j = np.argwhere(~ok)[0]
                raise NotQuadratic("F(x, y) is not bilinear", (tuple(X[xs[i]]), tuple(X[j])))
    else:
        xs = rng.integers(0, q, SAMPLE_SIZE)
        ys = rng.integers(0, q, SAMPLE_SIZE)
        ok = _pairs_ok(F, table, A, xs, ys)
        if not ok.all():
            i = int(np.argmax(~ok))
            raise NotQuadratic("F(x, y) is not bilinear", (tuple(X[xs[i]]), tuple(X[ys[i]])))

    # f(X) = X A X^T everywhere (cheap, so always exhaustive)
    rep = np.einsum("ki,ij,kj->k", X, A, X) % p
    if (rep != table).any():
        i = int(np.argmax(rep != table))
        raise NotQuadratic("f(X) != X A X^T", (tuple(X[i]), tuple(X[i])))

    A.setflags(write=False)
    lams, _ = diagonalize(A, p)
    lf = matmul_mod(A, inverse(F.trace_gram, p), p)
    lf.setflags(write=False)
    radical = Subspace.span(nullspace(lf.T, p), p, m)
    validation = "exhaustive" if exhaustive else f"sampled(n={SAMPLE_SIZE}, seed={seed})"
    return QuadraticForm(F, table, A, len(lams), sign_of(lams, p), lf, radical, validation, name)


def _as_fp(v, p):
    if isinstance(v, FieldElement):
        if any(v.coeffs[1:]):
            raise ValueError(f"form value {v!r} is not in the prime field")
        return v.coeffs[0]
    return int(v) % p


def form_from_gram(field: ExtensionField, A, **kw) -> QuadraticForm:
    """The form X -> X A X^T for a symmetric A."""
    X = field.coords_table
    A = np.asarray(A, dtype=np.int64) % field.p
    return make_form(field, np.einsum("ki,ij,kj->k", X, A, X) % field.p, **kw)


def builtin_table(kind: str, field: ExtensionField) -> np.ndarray:
    F = field
    p = F.p
    X = F.coords_table
    if kind == "trace_square":
        return F.trace_coords(F.mul_coords(X, X))
    if kind == "scaled_trace_square":
        theta = primitive_element(F).coords()
        return F.trace_coords(F.mul_coords(F.mul_coords(X, X), theta))
    if kind == "trace_square_quarter":
        t = F.trace_coords(X)
        return (F.trace_coords(F.mul_coords(X, X)) - pow(4, -1, p) * t * t) % p
    if kind == "trace_linear_square":
        t = F.trace_coords(X)
        return t * t % p
    if kind == "square":
        if F.m != 1:
            raise ValueError("the 'square' form x^2 is F_p-valued only when m = 1")
        return X[:, 0] * X[:, 0] % p
    if kind == "zero":
        return np.zeros(F.q, dtype=np.int64)
    raise ValueError(f"unknown builtin form {kind!r}; choose from {BUILTIN_FORMS}")


def builtin_form(kind: str, field: ExtensionField, **kw) -> QuadraticForm:
    """Tr(x^2), Tr(theta x^2) with theta primitive, Tr(x^2) - Tr(x)^2/4, Tr(x)^2, x^2, or 0."""
    return make_form(field, builtin_table(kind, field), name=kind, **kw)


def form_to_json(f: QuadraticForm) -> str:
    d = f.describe()
    d["table"] = f.table.tolist()
    return json.dumps(d)


def form_from_json(text: str, **kw) -> QuadraticForm:
    d = json.loads(text)
    F = ExtensionField.from_descriptor(d["field"])
    return make_form(F, d["table"], name=d.get("name", "custom"), **kw)


# --------------------------------------------------------------------------


def bilinear(f: QuadraticForm, x: FieldElement, y: FieldElement) -> int:
    return f.bilinear(x, y)


def rank_sign(f: QuadraticForm) -> tuple[int, int]:
    return f.rank, f.sign


def build_lf(f: QuadraticForm) -> np.ndarray:
    return f.lf_matrix


def solve_xb(f: QuadraticForm, b: FieldElement) -> FieldElement:
    return f.solve_xb(b)


def restrict(f: QuadraticForm, H: Subspace) -> tuple[int, int]:
    """Rank and sign of f restricted to H, in H's echelon basis."""
    if H.dim == 0:
        return 0, 1
    B = H.matrix
    lams, _ = diagonalize(B @ f.gram @ B.T % f.p, f.p)
    return len(lams), sign_of(lams, f.p)


def dual_space(f: QuadraticForm, H: Subspace) -> Subspace:
    """H^{perp_f} = {x : F(x, h) = 0 for all h in H}."""
    if H.dim == 0:
        return Subspace.full(f.p, f.dim)
    return Subspace.span(nullspace(H.matrix @ f.gram % f.p, f.p), f.p, f.dim)


def restricted_radical(f: QuadraticForm, H: Subspace) -> Subspace:
    """H intersected with H^{perp_f}; its dimension is dim H - R_H."""
    if H.dim == 0:
        return H
    B = H.matrix
    C = nullspace(B @ f.gram @ B.T % f.p, f.p)
    return Subspace.span(C @ B % f.p, f.p, f.dim)


def level_set_formula(r: int, rank_h: int, sign_h: int, beta: int, p: int) -> int:
    """|H cap D_beta| for an r-dimensional H with restricted rank/sign."""
    if r == 0:
        return 1 if beta % p == 0 else 0
    if rank_h % 2 == 0:
        return p ** (r - 1) + upsilon(beta, p) * eta((-1) ** (rank_h // 2), p) * sign_h * p ** (r - (rank_h + 2) // 2)
    return p ** (r - 1) + eta((-1) ** ((rank_h - 1) // 2) * beta, p) * sign_h * p ** (r - (rank_h + 1) // 2)


def count_level_set(f: QuadraticForm, H: Subspace, beta: int, method: str = "enumerate") -> int:
    if method == "enumerate":
        return int(np.count_nonzero(f.values(H.points()) == beta % f.p))
    if method == "formula":
        rh, eh = restrict(f, H)
        return level_set_formula(H.dim, rh, eh, beta, f.p)
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# witness subspaces


def isotropic_dim(rank_f: int, sign_f: int, s: int, p: int) -> int:
    """e_0: dimension of a maximal totally isotropic subspace containing the radical."""
    if rank_f % 2:
        return s - (rank_f + 1) // 2
    if sign_f == (-1) ** (rank_f * (p - 1) // 4):
        return s - rank_f // 2
    return s - (rank_f + 2) // 2


def rank1_dim(rank_f: int) -> int:
    """l_0: largest dimension promised for a rank-1 subspace avoiding the radical."""
    return (rank_f - 1) // 2 if rank_f % 2 else rank_f // 2


def _candidates(f: QuadraticForm, basis, avoid, want_value=None, want_zero=True):
    """Indices (ascending) of vectors orthogonal to ``basis`` and outside span(basis + avoid)."""
    F = f.field
    p = f.p
    X = F.coords_table
    mask = np.ones(F.q, dtype=bool)
    if want_zero:
        mask &= f.table == 0
    if want_value is not None:
        mask &= np.array([eta(int(v), p) for v in range(p)])[f.table] == want_value
    B = np.array(basis, dtype=np.int64).reshape(-1, f.dim)
    if B.shape[0]:
        mask &= ~(X @ (f.gram @ B.T % p) % p).any(axis=1)
    span = np.vstack([B, np.array(avoid, dtype=np.int64).reshape(-1, f.dim)])
    R, _ = rref(span, p) if span.shape[0] else (span, [])
    mask &= reduce_against(X, R, p).any(axis=1)
    return np.nonzero(mask)[0]


def _isotropic_extend(f: QuadraticForm, start, target: int, avoid=()):
    """Greedy lexicographic extension of a totally isotropic set to ``target`` vectors.

    Falls back to depth-first backtracking if the greedy scan stalls.
    """
    X = f.field.coords_table
    basis = [tuple(int(c) for c in v) for v in start]
    while len(basis) < target:
        cand = _candidates(f, basis, avoid)
        if cand.size == 0:
            break
        basis.append(tuple(int(c) for c in X[cand[0]]))
    if len(basis) >= target:
        return basis
    found = _backtrack(f, [tuple(int(c) for c in v) for v in start], target, avoid)
    if found is None:
        raise InternalSearchFailure(f"no totally isotropic set of size {target}")
    return found


def _backtrack(f, basis, target, avoid):
    if len(basis) >= target:
        return basis
    X = f.field.coords_table
    for i in _candidates(f, basis, avoid):
        got = _backtrack(f, basis + [tuple(int(c) for c in X[i])], target, avoid)
        if got is not None:
            return got
    return None


def construct_isotropic(f: QuadraticForm) -> Subspace:
    """An e_0-dimensional totally isotropic subspace containing Ker(L_f)."""
    e0 = isotropic_dim(f.rank, f.sign, f.dim, f.p)
    basis = _isotropic_extend(f, f.radical.basis, e0)
    H = Subspace.span(basis, f.p, f.dim)
    if H.dim != e0 or f.values(H.points()).any() or not f.radical.is_subspace_of(H):
        raise InternalSearchFailure("isotropic subspace failed post-verification")
    return H


def isotropic_avoiding_radical(f: QuadraticForm, dim: int) -> Subspace:
    """A totally isotropic subspace of the given dimension meeting Ker(L_f) only in 0."""
    basis = _isotropic_extend(f, (), dim, avoid=f.radical.basis)
    H = Subspace.span(basis, f.p, f.dim)
    if H.dim != dim or f.values(H.points()).any() or H.intersection_dim(f.radical):
        raise InternalSearchFailure("isotropic complement failed post-verification")
    return H


def construct_rank1_parts(f: QuadraticForm, beta: int, dim: int | None = None):
    """(J, gamma): J totally isotropic of dim-1, gamma orthogonal to J with eta(f(gamma)) = eta(beta).

    J + <gamma> is then a rank-1 subspace of sign eta(beta) avoiding the radical.
    """
    p = f.p
    if f.rank < 2:
        raise ValueError(f"need rank >= 2, got {f.rank}")
    if beta % p == 0:
        raise ValueError("beta must be nonzero")
    l0 = rank1_dim(f.rank)
    dim = l0 if dim is None else dim
    if not 1 <= dim <= l0:
        raise ValueError(f"dimension must lie in [1, {l0}], got {dim}")
    J = isotropic_avoiding_radical(f, dim - 1) if dim > 1 else Subspace.zero(p, f.dim)
    cand = _candidates(f, J.basis, f.radical.basis + J.basis, want_value=eta(beta, p), want_zero=False)
    if cand.size == 0:
        raise InternalSearchFailure("no vector of the requested quadratic class orthogonal to J")
    gamma = tuple(int(c) for c in f.field.coords_table[cand[0]])
    return J, gamma


def construct_rank1(f: QuadraticForm, beta: int, dim: int | None = None) -> Subspace:
    """An l_0-dimensional H with R_H = 1, sign eta(beta) and H cap Ker(L_f) = {0}."""
    J, gamma = construct_rank1_parts(f, beta, dim)
    H = Subspace.span(list(J.basis) + [gamma], f.p, f.dim)
    if restrict(f, H) != (1, eta(beta, f.p)) or H.intersection_dim(f.radical) or H.dim != J.dim + 1:
        raise InternalSearchFailure("rank-1 subspace failed post-verification")
    return H
