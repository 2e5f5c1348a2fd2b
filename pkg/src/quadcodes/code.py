"""The defining-set code C_D and its weight distribution.

D = {(x, y) in GF(q1) x GF(q2) minus (0, 0) : f(x) + Tr(alpha y) = 0}, listed
coordinate-lexicographically in (x, y).  A point (x, y) is stored as the
block vector coords(x) || coords(y) of length s = s1 + s2, and the codeword
of a message (u, v) has entries Tr(u x) + Tr(v y) over the points of D.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cyclo import eta, upsilon
from .errors import FieldMismatch, HypothesisViolated, LengthMismatch, SizeGuardExceeded
from .gf import FieldElement, make_field
from .linalg import digits, matmul_mod, rank
from .quadform import QuadraticForm, builtin_form

DEFAULT_MAX_POINTS = 10**6
DEFAULT_MAX_CODEWORDS = 10**9  # p^s * n entries touched by exhaustive enumeration
CHUNK = 2048


@dataclass(frozen=True, eq=False)
class CodeParams:
    form: QuadraticForm
    alpha: FieldElement

    def __post_init__(self):
        if self.alpha.is_zero():
            raise ValueError("alpha must be nonzero")
        if self.alpha.field.p != self.form.p:
            raise FieldMismatch("alpha and the form live over different primes")

    @property
    def p(self) -> int:
        return self.form.p

    @property
    def s1(self) -> int:
        return self.form.dim

    @property
    def s2(self) -> int:
        return self.alpha.field.m

    @property
    def s(self) -> int:
        return self.s1 + self.s2

    @property
    def field1(self):
        return self.form.field

    @property
    def field2(self):
        return self.alpha.field

    def describe(self) -> dict:
        return {
            "p": self.p,
            "s1": self.s1,
            "s2": self.s2,
            "alpha": list(self.alpha.coeffs),
            "form": self.form.name,
            "rank": self.form.rank,
            "sign": self.form.sign,
            "field1": self.field1.descriptor(),
            "field2": self.field2.descriptor(),
        }


def make_params(p: int, s1: int, s2: int, form="trace_square", alpha=None, **kw) -> CodeParams:
    """Convenience constructor; ``form`` is a builtin name or a QuadraticForm, alpha defaults to 1."""
    F1 = make_field(p, s1, **kw)
    F2 = make_field(p, s2, **kw)
    f = builtin_form(form, F1) if isinstance(form, str) else form
    a = F2.one() if alpha is None else F2(alpha)
    return CodeParams(f, a)


@dataclass(frozen=True, eq=False)
class DefiningSet:
    params: CodeParams
    points: np.ndarray  # (n, s) block coordinate rows

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def s(self) -> int:
        return self.params.s

    @property
    def p(self) -> int:
        return self.params.p

    def pairs(self):
        F1, F2 = self.params.field1, self.params.field2
        s1 = self.params.s1
        return [(F1.from_coords(z[:s1]), F2.from_coords(z[s1:])) for z in self.points]

    @functools.cached_property
    def pairing(self) -> np.ndarray:
        """Block trace Gram diag(T1, T2): Tr((x,y) . (u,v)) = Z @ pairing @ W^T."""
        s1, s = self.params.s1, self.s
        T = np.zeros((s, s), dtype=np.int64)
        T[:s1, :s1] = self.params.field1.trace_gram
        T[s1:, s1:] = self.params.field2.trace_gram
        return T

    @functools.cached_property
    def alpha_trace(self) -> np.ndarray:
        """Tr(alpha y) for every y of GF(q2), by index."""
        F2 = self.params.field2
        return F2.trace_coords(F2.mul_coords(F2.coords_table, self.params.alpha.coords()))

    def on_quadric(self, Z) -> np.ndarray:
        """Mask of rows (x, y) of Z with f(x) + Tr(alpha y) = 0; the origin counts."""
        Z = np.asarray(Z, dtype=np.int64).reshape(-1, self.s)
        s1 = self.params.s1
        fx = self.params.form.table[self.params.field1.index(Z[:, :s1])]
        ty = self.alpha_trace[self.params.field2.index(Z[:, s1:])]
        return (fx + ty) % self.p == 0

    def contains(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=np.int64).reshape(-1, self.s)
        return self.on_quadric(Z) & Z.any(axis=1)

    @functools.cached_property
    def generator(self) -> np.ndarray:
        """(s, n) matrix G with c_(u,v) = (u||v) @ G mod p."""
        G = matmul_mod(self.pairing, self.points.T, self.p)
        G.setflags(write=False)
        return G


def defining_mask(params: CodeParams) -> np.ndarray:
    """(q1, q2) boolean table of f(x) + Tr(alpha y) = 0, origin included."""
    F2 = params.field2
    tay = F2.trace_coords(F2.mul_coords(F2.coords_table, params.alpha.coords()))
    return (params.form.table[:, None] + tay[None, :]) % params.p == 0


def build_defining_set(params: CodeParams, *, max_points: int = DEFAULT_MAX_POINTS) -> DefiningSet:
    p, s = params.p, params.s
    if p**s > max_points:
        raise SizeGuardExceeded(f"defining set scan over p^s = {p}^{s}", p**s, max_points)
    mask = defining_mask(params)
    mask[0, 0] = False
    xi, yi = np.nonzero(mask)  # row-major: lexicographic in (x, y)
    pts = np.hstack([params.field1.coords_table[xi], params.field2.coords_table[yi]])
    pts.setflags(write=False)
    if pts.shape[0] != p ** (s - 1) - 1:
        raise LengthMismatch(f"|D| = {pts.shape[0]}, expected p^(s-1) - 1 = {p ** (s - 1) - 1}")
    return DefiningSet(params, pts)


def block_trace_dot(X, Y) -> int:
    """Tr(X . Y) = sum_i Tr(x_i y_i) for equal-length tuples of field elements."""
    if len(X) != len(Y):
        raise LengthMismatch("block tuples differ in length")
    p = X[0].field.p if X else 0
    return sum((x * y).trace() for x, y in zip(X, Y)) % p if X else 0


def codeword(D: DefiningSet, u: FieldElement, v: FieldElement) -> np.ndarray:
    w = np.concatenate([D.params.field1(u).coords(), D.params.field2(v).coords()])
    return matmul_mod(w[None, :], D.generator, D.p)[0]


def hamming_weight(c) -> int:
    return int(np.count_nonzero(c))


# --------------------------------------------------------------------------
# closed forms


def _alpha_multiple(params: CodeParams, v: FieldElement):
    """c in F_p* with v = c alpha, or None."""
    for c in range(1, params.p):
        if (params.alpha * c) == v:
            return c
    return None


def closed_form_weight(p: int, s: int, rank_f: int, sign_f: int, fxu) -> int:
    """Weight of c_(u,v) for v in F_p* alpha; fxu = f(x_u), or None when u is off Im(L_f)."""
    base = p ** (s - 2) * (p - 1)
    if fxu is None:
        return base
    if rank_f % 2:
        k = (rank_f - 1) // 2
        sgn = sign_f * eta(fxu, p) * (-1) ** (k * (p - 1) // 2)
    else:
        k = rank_f // 2
        sgn = upsilon(fxu, p) * sign_f * (-1) ** (k * (p - 1) // 2)
    assert s - 2 - k >= 0, "non-integral weight"
    return base - sgn * p ** (s - 2 - k)


def predicted_weight(params: CodeParams, u: FieldElement, v: FieldElement) -> int:
    """Codeword weight from the closed forms, for (u, v) != (0, 0)."""
    u = params.field1(u)
    v = params.field2(v)
    if u.is_zero() and v.is_zero():
        raise ValueError("(u, v) must be nonzero")
    p, s = params.p, params.s
    if _alpha_multiple(params, v) is None:
        return p ** (s - 2) * (p - 1)
    in_image, fxu = params.form.image_table
    i = u.index
    return closed_form_weight(p, s, params.form.rank, params.form.sign, int(fxu[i]) if in_image[i] else None)


def table_rows(params: CodeParams) -> list[dict]:
    """Rows of the weight-distribution table for the form's rank parity.

    Weights and multiplicities are evaluated in integers: every power of
    (p*)^{-1/2} is rewritten as a sign times a nonnegative power of p.
    """
    p, s = params.p, params.s
    R, eps = params.form.rank, params.form.sign
    if R == 0:
        raise HypothesisViolated("rank 0: the code has dimension < s and no table applies")
    base = p ** (s - 2)
    if R % 2:
        k = (R - 1) // 2
        assert R - 1 - k >= 0 and s - 2 - k >= 0
        rows = [
            ((p - 1) * base, p**s - p ** (R - 1) * (p - 1) ** 2 - 1),
            ((p - 1) * base - p ** (s - 2 - k), (p - 1) ** 2 * (p ** (R - 1) + p ** (R - 1 - k)) // 2),
            ((p - 1) * base + p ** (s - 2 - k), (p - 1) ** 2 * (p ** (R - 1) - p ** (R - 1 - k)) // 2),
        ]
        table = "odd"
    else:
        h = R // 2
        e = eps * (-1) ** (h * (p - 1) // 2)  # eps * (p*)^{-h} = e * p^{-h}
        assert R - 1 - h >= 0 and s - 2 - h >= 0
        rows = [
            ((p - 1) * base, p**s - p**R * (p - 1) - 1),
            ((p - 1) * (base - e * p ** (s - 2 - h)), (p - 1) * (p ** (R - 1) + e * (p - 1) * p ** (R - 1 - h))),
            ((p - 1) * base + e * p ** (s - 2 - h), (p - 1) ** 2 * (p ** (R - 1) - e * p ** (R - 1 - h))),
        ]
        table = "even"
    return [{"table": table, "row": i + 1, "weight": w, "multiplicity": a} for i, (w, a) in enumerate(rows)]


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightEnumerator:
    counts: tuple  # sorted (weight, multiplicity) pairs, zero multiplicities dropped
    n: int
    k: int

    @classmethod
    def from_dict(cls, d, n, k) -> WeightEnumerator:
        merged = {}
        for w, a in d.items():
            merged[int(w)] = merged.get(int(w), 0) + int(a)
        return cls(tuple(sorted((w, a) for w, a in merged.items() if a)), n, k)

    def as_dict(self) -> dict:
        return dict(self.counts)

    @property
    def nonzero_weights(self) -> list[int]:
        return [w for w, _ in self.counts if w]

    @property
    def total(self) -> int:
        return sum(a for _, a in self.counts)

    def __str__(self):
        terms = []
        for w, a in self.counts:
            terms.append(str(a) if w == 0 else (f"x^{w}" if a == 1 else f"{a}x^{w}"))
        return " + ".join(terms)


def _weight_histogram(G: np.ndarray, p: int, start: int, stop: int) -> np.ndarray:
    W = digits(np.arange(start, stop), p, G.shape[0])
    wts = np.count_nonzero(matmul_mod(W, G, p), axis=1)
    return np.bincount(wts, minlength=G.shape[1] + 1)


def enumerate_weights(D: DefiningSet, *, workers: int = 1, max_work: int = DEFAULT_MAX_CODEWORDS) -> WeightEnumerator:
    """Exhaustive weight count over all p^s messages.

    The message range is cut into fixed chunks independent of ``workers`` and
    the histograms are summed, so the result does not depend on scheduling.
    """
    p, s, n = D.p, D.s, D.n
    total = p**s
    if total * n > max_work:
        raise SizeGuardExceeded(f"weight enumeration p^s*n = {total}*{n}", total * n, max_work)
    G = D.generator
    bounds = [(a, min(total, a + CHUNK)) for a in range(0, total, CHUNK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _weight_histogram(G, p, *b), bounds))
    else:
        parts = [_weight_histogram(G, p, *b) for b in bounds]
    hist = np.sum(parts, axis=0)
    zeros = int(hist[0])
    k = s
    while p ** (s - k) < zeros:
        k -= 1
    assert p ** (s - k) == zeros, "zero-codeword count is not a power of p"
    # each codeword arises from p^(s-k) messages
    assert (hist % zeros == 0).all()
    return WeightEnumerator.from_dict({w: int(c) // zeros for w, c in enumerate(hist)}, n, k)


def formula_weights(params: CodeParams) -> WeightEnumerator:
    rows = table_rows(params)
    d = {0: 1}
    for r in rows:
        d[r["weight"]] = d.get(r["weight"], 0) + r["multiplicity"]
    return WeightEnumerator.from_dict(d, params.p ** (params.s - 1) - 1, params.s)


@dataclass(frozen=True)
class WeightComparison:
    enumerated: WeightEnumerator
    formula: WeightEnumerator | None
    agree: bool
    note: str = ""


def weight_distribution(D: DefiningSet, method: str = "enumerate", *, workers: int = 1, **kw):
    """WeightEnumerator for 'enumerate' or 'formula'; a WeightComparison for 'both'.

    Disagreement in 'both' mode is returned as data, never raised.
    """
    if method == "enumerate":
        return enumerate_weights(D, workers=workers, **kw)
    if method == "formula":
        return formula_weights(D.params)
    if method == "both":
        enum = enumerate_weights(D, workers=workers, **kw)
        try:
            form = formula_weights(D.params)
        except HypothesisViolated as exc:
            return WeightComparison(enum, None, False, f"formula unavailable: {exc}")
        return WeightComparison(enum, form, enum == form, "" if enum == form else "mismatch")
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class CodeSummary:
    n: int
    k: int
    d: int
    is_three_weight: bool
    enumerator: WeightEnumerator

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d, "is_three_weight": self.is_three_weight}


def code_summary(D: DefiningSet, *, enumerator: WeightEnumerator | None = None, workers: int = 1) -> CodeSummary:
    """[n, k, d] from exhaustive enumeration; k is cross-checked against rank(G)."""
    W = enumerator or enumerate_weights(D, workers=workers)
    assert W.k == rank(D.generator, D.p), "message map kernel disagrees with generator rank"
    nz = W.nonzero_weights
    return CodeSummary(D.n, W.k, min(nz) if nz else 0, len(nz) == 3, W)


@dataclass(frozen=True)
class Minimality:
    ratio_ok: bool
    w_min: int
    w_max: int


def minimality_check(W: WeightEnumerator, p: int) -> Minimality:
    """w_min / w_max > (p-1)/p, compared exactly as p w_min > (p-1) w_max."""
    nz = W.nonzero_weights if isinstance(W, WeightEnumerator) else sorted(w for w in W if w)
    if not nz:
        raise ValueError("no nonzero weights")
    lo, hi = min(nz), max(nz)
    return Minimality(p * lo > (p - 1) * hi, lo, hi)
