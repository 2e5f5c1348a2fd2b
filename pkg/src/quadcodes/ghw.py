"""Generalized Hamming weights of C_D.

Two spaces appear here and both are F_p^s in block coordinates:

* point space, holding (x, y) with the points of D;
* message space, holding (u, v), the messages of codewords.

They are paired by Tr(ux) + Tr(vy) = Z @ P @ W^T with P = diag(T1, T2).
An r-dimensional subcode is an r-dimensional K in message space, and its
support size is n - |D cap K^perp|.  Equivalently d_r = n - max |D cap H| over
(s - r)-dimensional H in point space.  Both routes are implemented so one can
check the other.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cyclo
from .code import CodeParams, DefiningSet, build_defining_set
from .errors import HypothesisViolated, SizeGuardExceeded, WitnessVerificationFailed
from .linalg import digits, matmul_mod, nullspace, reduce_against
from .quadform import (
    construct_isotropic,
    construct_rank1_parts,
    isotropic_avoiding_radical,
    isotropic_dim,
)
from .subspace import (
    DEFAULT_MAX_SUBSPACES,
    Subspace,
    SubspaceIterator,
    enumerate_subspaces,
    gaussian_binomial,
)

__all__ = [
    "SubspaceIterator",
    "enumerate_subspaces",
    "gaussian_binomial",
    "intersect_count",
    "pairing_dual",
    "n_of_subspace",
    "n_of_subspace_charsum",
    "d_r_bruteforce",
    "bruteforce_cost",
    "WeightHierarchy",
    "hierarchy_bruteforce",
    "hierarchy_formula",
    "formula_dr",
    "witness_subspace",
    "is_r_mds",
]

DEFAULT_MAX_WORK = 5 * 10**8  # subspaces * n * s entries touched by a brute-force pass
BLOCK_ENTRIES = 2 * 10**6


def intersect_count(D: DefiningSet, H: Subspace, path: str | None = None) -> int:
    """|D cap H| for H in point space.

    path 'reduce' reduces every point of D against H's echelon basis; path
    'points' walks H's p^dim points and tests the defining equation.  By default
    the cheaper one is taken.
    """
    if path is None:
        path = "reduce" if D.p**H.dim > D.n else "points"
    if path == "reduce":
        if H.dim == 0:
            return 0
        return int(np.count_nonzero(~reduce_against(D.points, H.matrix, D.p).any(axis=1)))
    if path == "points":
        return int(np.count_nonzero(D.contains(H.points())))
    raise ValueError(f"unknown path {path!r}")


def pairing_dual(D: DefiningSet, H: Subspace) -> Subspace:
    """H^perp under the block trace pairing; maps message space to point space and back."""
    if H.dim == 0:
        return Subspace.full(D.p, D.s)
    return Subspace.span(nullspace(H.matrix @ D.pairing % D.p, D.p), D.p, D.s)


@functools.lru_cache(maxsize=64)
def _all_points(p: int, s: int) -> np.ndarray:
    return digits(np.arange(p**s), p, s)


def n_of_subspace(D: DefiningSet, H: Subspace) -> int:
    """N(H): points of the whole space on the quadric and orthogonal to H (message space).

    Counted directly over all p^s points, independently of the list D.
    """
    Z = _all_points(D.p, D.s)
    mask = D.on_quadric(Z)
    if H.dim:
        mask &= ~matmul_mod(Z, D.pairing @ H.matrix.T % D.p, D.p).any(axis=1)
    return int(np.count_nonzero(mask))


def n_of_subspace_charsum(D: DefiningSet, H: Subspace) -> int:
    """N(H) from the character-sum expression, in exact cyclotomic arithmetic.

    p^{r+1} N = p^s + eps p^{s-R} S, where S sums sigma_z(g^R zeta^{-f(x_u)})
    over z in F_p* and over the u in Im(L_f) with (u, -alpha) in H.  S is a
    rational integer; when -alpha is not a second-block value of H it is 0.
    """
    prm = D.params
    f, p, s, s1 = prm.form, D.p, D.s, prm.s1
    R, eps = f.rank, f.sign
    neg_alpha = (-prm.alpha).coords()
    pts = H.points()
    sel = (pts[:, s1:] == neg_alpha).all(axis=1)
    in_image, fxu = f.image_table
    gR = cyclo.pstar_power(p, R)
    total = cyclo.CycInt.integer(p, 0)
    for u in pts[sel, :s1]:
        i = int(prm.field1.index(u))
        if not in_image[i]:
            continue
        base = gR * cyclo.CycInt.zeta(p, -int(fxu[i]))
        for z in range(1, p):
            total = total + cyclo.galois(z, base)
    S = total.to_int()
    num = p**s + eps * p ** (s - R) * S
    assert num % p ** (H.dim + 1) == 0, "character-sum count is not integral"
    return num // p ** (H.dim + 1)


# --------------------------------------------------------------------------
# brute force


@dataclass(frozen=True)
class BruteForceResult:
    r: int
    d: int
    method: str
    count: int  # subspaces scanned
    certificate: Subspace  # point-space H ('direct') or message-space K ('dual')


def bruteforce_cost(D: DefiningSet, r: int) -> tuple[int, int]:
    """(subspace count, entries touched) for d_r by either method."""
    count = gaussian_binomial(D.s, r, D.p)
    return count, count * D.n * D.s


def _scan_direct(D: DefiningSet, block: np.ndarray):
    """Best |D cap H| within a block of RREF bases sharing one pivot pattern."""
    b, k, s = block.shape
    if k == 0:
        return 0, 0
    piv = [int(np.nonzero(block[0, i])[0][0]) for i in range(k)]
    coef = D.points[:, piv]
    proj = matmul_mod(coef, block, D.p)  # (b, n, s)
    hits = (proj == D.points).all(axis=2).sum(axis=1)
    j = int(np.argmax(hits))
    return int(hits[j]), j


def _scan_dual(D: DefiningSet, block: np.ndarray):
    """Best count of zero columns of K @ G within a block of message-space bases."""
    cw = matmul_mod(block, D.generator, D.p)  # (b, r, n)
    zeros = (~cw.any(axis=1)).sum(axis=1)
    j = int(np.argmax(zeros))
    return int(zeros[j]), j


def d_r_bruteforce(
    D: DefiningSet,
    r: int,
    method: str = "direct",
    *,
    workers: int = 1,
    max_subspaces: int = DEFAULT_MAX_SUBSPACES,
    max_work: int = DEFAULT_MAX_WORK,
) -> BruteForceResult:
    """Exact d_r by scanning all subspaces; the first maximizer is kept as certificate.

    'direct' scans (s-r)-dimensional H in point space for max |D cap H|;
    'dual' scans r-dimensional K in message space for max zero columns.
    Blocks are reduced in enumeration order, so the certificate does not
    depend on ``workers``.
    """
    s, n = D.s, D.n
    if not 1 <= r <= s:
        raise ValueError(f"r must lie in [1, {s}], got {r}")
    if method not in ("direct", "dual"):
        raise ValueError(f"unknown method {method!r}")
    k = s - r if method == "direct" else r
    it = SubspaceIterator(s, k, D.p, max_subspaces=max_subspaces)
    work = it.count * n * s
    if work > max_work:
        raise SizeGuardExceeded(f"d_{r} brute force ({it.count} subspaces, n = {n})", work, max_work)
    scan = _scan_direct if method == "direct" else _scan_dual
    per = max(1, BLOCK_ENTRIES // (n * max(k, 1) * s))
    blocks = list(it.blocks(max_block=per))

    def run(block):
        return scan(D, block)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]
    best, bi = -1, 0
    for i, (val, _) in enumerate(results):
        if val > best:
            best, bi = val, i
    cert = Subspace(D.p, s, tuple(tuple(int(c) for c in row) for row in blocks[bi][results[bi][1]]))
    return BruteForceResult(r, n - best, method, it.count, cert)


# --------------------------------------------------------------------------
# hierarchy


@dataclass
class WeightHierarchy:
    n: int
    s: int
    d: list  # d[r-1] = d_r, None where not computed
    methods: list
    labels: list = field(default_factory=list)
    certificates: list = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [""] * self.s
        if not self.certificates:
            self.certificates = [None] * self.s

    def values(self) -> tuple:
        return tuple(self.d)

    def strictly_increasing(self) -> bool:
        known = [x for x in self.d if x is not None]
        return all(a < b for a, b in zip(known, known[1:]))

    def within_bounds(self) -> bool:
        """r <= d_r <= n - s + r for every computed entry."""
        return all(x is None or r <= x <= self.n - self.s + r for r, x in enumerate(self.d, 1))

    def mds_flags(self) -> list:
        return [None if x is None else x == self.n - self.s + r for r, x in enumerate(self.d, 1)]

    def as_dict(self) -> dict:
        return {
            "d": list(self.d),
            "methods": list(self.methods),
            "labels": list(self.labels),
            "mds": self.mds_flags(),
            "certificates": [None if c is None else c.rows() for c in self.certificates],
        }


def hierarchy_bruteforce(D: DefiningSet, r_values=None, method: str = "direct", **kw) -> WeightHierarchy:
    """Brute-force d_r for r in ``r_values`` (default 1..s); guard overruns leave None."""
    s = D.s
    r_values = range(1, s + 1) if r_values is None else r_values
    H = WeightHierarchy(D.n, s, [None] * s, [None] * s)
    for r in r_values:
        try:
            res = d_r_bruteforce(D, r, method, **kw)
        except SizeGuardExceeded as exc:
            H.methods[r - 1] = f"skipped: guard ({exc.cost} > {exc.limit})"
            continue
        H.d[r - 1] = res.d
        H.methods[r - 1] = f"bruteforce-{method}"
        H.certificates[r - 1] = res.certificate
    return H


def _regime_data(params: CodeParams):
    f = params.form
    R, eps, p = f.rank, f.sign, params.p
    if R < 3:
        raise HypothesisViolated(f"hierarchy formula needs rank >= 3, got {R}")
    e0 = isotropic_dim(R, eps, params.s1, p)
    if R % 2:
        case = 1
    elif eps == (-1) ** (R * (p - 1) // 4):
        case = 2
    else:
        case = 3
    return e0, case


def formula_dr(params: CodeParams, r: int) -> tuple[int, str]:
    """(d_r, label) from the closed forms."""
    p, s, s1 = params.p, params.s, params.s1
    R = params.form.rank
    e0, case = _regime_data(params)
    if not 1 <= r <= s:
        raise ValueError(f"r must lie in [1, {s}], got {r}")
    if r >= s1 - e0 + 1:
        return p ** (s - 1) - p ** (s - r), "regime 1"
    head = p ** (s - 1) - p ** (s - 1 - r)
    if case == 1:
        return head - p ** (s - 1 - (R + 1) // 2), "regime 2 case 1"
    if case == 2:
        return head - (p - 1) * p ** (s - 1 - (R + 2) // 2), "regime 2 case 2"
    return head - p ** (s - 1 - (R + 2) // 2), "regime 2 case 3"


def hierarchy_formula(params: CodeParams) -> WeightHierarchy:
    s = params.s
    vals = [formula_dr(params, r) for r in range(1, s + 1)]
    return WeightHierarchy(
        params.p ** (s - 1) - 1,
        s,
        [v for v, _ in vals],
        ["formula"] * s,
        [lab for _, lab in vals],
    )


# --------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Witness:
    r: int
    subspace: Subspace
    space: str  # 'points' (H of dim s-r, scored by |D cap H|) or 'messages' (K of dim r, scored by N)
    construction: str
    score: int
    d: int

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "space": self.space,
            "construction": self.construction,
            "score": self.score,
            "d": self.d,
            "basis": self.subspace.rows(),
        }


def _trace_kernel(params: CodeParams) -> np.ndarray:
    """Basis of {y in GF(q2) : Tr(alpha y) = 0}, as coordinate rows."""
    F2 = params.field2
    row = F2.trace_gram @ params.alpha.coords() % params.p  # Tr(alpha y) = y @ row
    return nullspace(row.reshape(1, -1), params.p)


def _product_basis(params: CodeParams, J: Subspace) -> np.ndarray:
    """Echelon basis of J x T_alpha in point space."""
    s1, s2 = params.s1, params.s2
    T = _trace_kernel(params)
    rows = [np.concatenate([j, np.zeros(s2, dtype=np.int64)]) for j in J.matrix]
    rows += [np.concatenate([np.zeros(s1, dtype=np.int64), t]) for t in T]
    return np.array(rows, dtype=np.int64).reshape(-1, s1 + s2)


def _boundary_extra(params: CodeParams, J: Subspace) -> np.ndarray:
    """(u, v): u lex-first in J^perp with f(u) != 0, v lex-first with Tr(alpha v) = -f(u)."""
    f = params.form
    F1, F2 = params.field1, params.field2
    p = params.p
    X = F1.coords_table
    orth = ~(X @ (f.gram @ J.matrix.T % p) % p).any(axis=1) if J.dim else np.ones(F1.q, dtype=bool)
    cand = np.nonzero(orth & (f.table != 0))[0]
    if cand.size == 0:
        raise WitnessVerificationFailed("no anisotropic vector orthogonal to the isotropic subspace")
    u = X[cand[0]]
    fu = int(f.table[cand[0]])
    ty = F2.trace_coords(F2.mul_coords(F2.coords_table, params.alpha.coords()))
    v = F2.coords_table[int(np.nonzero(ty == (-fu) % p)[0][0])]
    return np.concatenate([u, v])


def _message_witness(params: CodeParams, alphas: np.ndarray) -> Subspace:
    """<(L_f(mu_i), -alpha)> with mu_i = alpha_i + alpha_r (i < r) and mu_r = alpha_r."""
    p = params.p
    r = alphas.shape[0]
    mu = alphas.copy()
    mu[: r - 1] = (mu[: r - 1] + alphas[r - 1]) % p
    U = mu @ params.form.lf_matrix % p
    V = np.broadcast_to((-params.alpha).coords(), (r, params.s2))
    return Subspace.span(np.hstack([U, V]), p, params.s)


def witness_subspace(params: CodeParams, r: int, D: DefiningSet | None = None) -> Witness:
    """A subspace attaining the closed-form d_r, verified by direct counting.

    Regime 1 returns an (s-r)-dim H in point space inside J_{e_0} x T_alpha.
    Below the boundary it returns an r-dim K in message space whose N(K) is
    extremal.  At the boundary it returns (J_{e_0} x T_alpha) + <(u, v)>.
    """
    D = D or build_defining_set(params)
    f, p, s, s1 = params.form, params.p, params.s, params.s1
    e0, case = _regime_data(params)
    d, label = formula_dr(params, r)
    n = D.n

    def check_points(H: Subspace, construction: str) -> Witness:
        got = intersect_count(D, H)
        if H.dim != s - r or n - got != d:
            raise WitnessVerificationFailed(f"{construction}: |D cap H| = {got}, expected {n - d}")
        return Witness(r, H, "points", construction, got, d)

    if label == "regime 1":
        J = construct_isotropic(f)
        B = _product_basis(params, J)[: s - r]
        return check_points(Subspace.span(B, p, s), "isotropic x trace-kernel")

    R = f.rank
    boundary = (R + 1) // 2 if case == 1 else R // 2 + (1 if case == 3 else 0)
    if case in (1, 3) and r == boundary:
        J = construct_isotropic(f)
        B = np.vstack([_product_basis(params, J), _boundary_extra(params, J)])
        return check_points(Subspace.span(B, p, s), "isotropic x trace-kernel + (u, v)")

    if case == 2:
        alphas = isotropic_avoiding_radical(f, r).matrix
        construction = "isotropic image"
    else:
        if case == 1:
            want = (-1) ** ((R - 1) * (p - 1) // 4) * f.sign
        else:
            want = 1
        beta = 1 if want == 1 else next(z for z in range(2, p) if cyclo.eta(z, p) == -1)
        J, gamma = construct_rank1_parts(f, beta, r)
        alphas = np.vstack([J.matrix.reshape(-1, s1), np.array(gamma, dtype=np.int64)])
        construction = "rank-1 image"
    K = _message_witness(params, alphas)
    N = n_of_subspace(D, K)
    if K.dim != r or n + 1 - N != d:
        raise WitnessVerificationFailed(f"{construction}: N = {N}, expected {n + 1 - d}")
    return Witness(r, K, "messages", construction, N, d)


def is_r_mds(D: DefiningSet, r: int, d_r: int, k: int | None = None) -> bool:
    k = D.s if k is None else k
    return d_r == D.n - k + r


def support_of_subcode(D: DefiningSet, K: Subspace) -> int:
    """Size of the union of supports of the codewords in K (message space)."""
    if K.dim == 0:
        return 0
    cw = matmul_mod(K.matrix, D.generator, D.p)
    return int(np.count_nonzero(cw.any(axis=0)))
