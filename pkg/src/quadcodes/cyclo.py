"""Exact arithmetic in Z[zeta_p] for character-sum identities.

A CycInt stores sum(c_i zeta^i, i < p) with c_0 = 0: any representative is
shifted along the all-ones vector (1 + zeta + ... + zeta^{p-1} = 0) until its
constant coefficient vanishes.  Since zeta, ..., zeta^{p-1} is a Q-basis of
Q(zeta_p), equality is coefficient equality in this form.

Coefficients are Python ints, so there is no overflow bound to check.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InvalidAutomorphism, ModulusMismatch, NotInImage


def eta(z: int, p: int) -> int:
    """Quadratic character of F_p, extended by eta(0) = 0."""
    z %= p
    if z == 0:
        return 0
    return 1 if pow(z, (p - 1) // 2, p) == 1 else -1


def upsilon(z: int, p: int) -> int:
    return p - 1 if z % p == 0 else -1


def pstar(p: int) -> int:
    return (-1) ** ((p - 1) // 2) * p


@dataclass(frozen=True)
class CycInt:
    p: int
    coeffs: tuple

    @classmethod
    def make(cls, p: int, coeffs) -> CycInt:
        coeffs = list(coeffs)
        if len(coeffs) != p:
            raise ValueError(f"need {p} coefficients, got {len(coeffs)}")
        c0 = coeffs[0]
        return cls(p, tuple(int(c - c0) for c in coeffs))

    @classmethod
    def integer(cls, p: int, n: int) -> CycInt:
        return cls.make(p, [n] + [0] * (p - 1))

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> CycInt:
        c = [0] * p
        c[k % p] = 1
        return cls.make(p, c)

    def _same(self, other) -> CycInt:
        if isinstance(other, int):
            return CycInt.integer(self.p, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.p != self.p:
            raise ModulusMismatch(f"Z[zeta_{self.p}] vs Z[zeta_{other.p}]")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return CycInt.make(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: int) -> CycInt:
        return CycInt(self.p, tuple(k * c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._same(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % p] += a * b
        return CycInt.make(p, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycInt:
        if k < 0:
            raise ValueError("negative powers are not in Z[zeta_p]")
        result = CycInt.integer(self.p, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_rational(self) -> bool:
        return len(set(self.coeffs[1:])) <= 1

    def to_int(self) -> int:
        """The rational integer n = -c_1 when every c_i (i >= 1) equals -n."""
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational integer")
        return -self.coeffs[1] if self.p > 1 else 0

    def __str__(self):
        terms = [f"{c}ζ^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def add(a: CycInt, b: CycInt) -> CycInt:
    return a + b


def mul(a: CycInt, b: CycInt) -> CycInt:
    return a * b


def neg(a: CycInt) -> CycInt:
    return -a


def scale(a: CycInt, k: int) -> CycInt:
    return a.scale(k)


def galois(z: int, a: CycInt) -> CycInt:
    """sigma_z: zeta -> zeta^z."""
    p = a.p
    if z % p == 0:
        raise InvalidAutomorphism(f"sigma_{z} is not an automorphism of Q(zeta_{p})")
    out = [0] * p
    for i, c in enumerate(a.coeffs):
        out[(z * i) % p] += c
    return CycInt.make(p, out)


@functools.lru_cache(maxsize=None)
def gauss_sum(p: int) -> CycInt:
    """g = sum_{t != 0} eta(t) zeta^t, the square root of p* used throughout."""
    g = CycInt.make(p, [eta(t, p) for t in range(p)])
    assert g * g == CycInt.integer(p, pstar(p)), "g^2 != p*"
    return g


def pstar_power(p: int, k: int) -> CycInt:
    """(p*)^{k/2}, realized as g^k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return gauss_sum(p) ** k


def char_sum(exponents, p: int) -> CycInt:
    """sum zeta^e over a multiset of exponents."""
    counts = Counter(int(e) % p for e in exponents)
    return CycInt.make(p, [counts.get(i, 0) for i in range(p)])


def char_sum_counts(counts, p: int) -> CycInt:
    """Same as char_sum, from a length-p multiplicity vector."""
    return CycInt.make(p, [int(c) for c in counts])


def sigma_sum_sides(p: int, r: int, z: int) -> tuple[CycInt, CycInt, int]:
    """Both sides of the sigma-sum identity after clearing denominators.

    The left side is sum_{y in F_p*} sigma_y(g^r zeta^z).  The closed form
    carries (p*)^{-e} with e = floor(r/2), so both sides are multiplied by
    (p*)^e and compared in Z[zeta_p].  Returns (scaled lhs, scaled rhs, e).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    g_r = pstar_power(p, r)
    lhs = CycInt.integer(p, 0)
    for y in range(1, p):
        lhs = lhs + galois(y, g_r * CycInt.zeta(p, z))
    if r % 2:
        e = (r - 1) // 2
        rhs = eta(-z, p) * p**r
    else:
        e = r // 2
        rhs = upsilon(z, p) * p**r
    return lhs * (pstar(p) ** e), CycInt.integer(p, rhs), e


def verify_sigma_sum(p: int, r: int, z: int) -> bool:
    lhs, rhs, _ = sigma_sum_sides(p, r, z)
    return lhs == rhs


def exp_sum_sides(f, b) -> tuple[CycInt, CycInt]:
    """Exponential sum of zeta^{f(x) - Tr(bx)} over the field, and its closed form.

    ``f`` is a QuadraticForm, ``b`` a FieldElement of its field.
    """
    F = f.field
    p = F.p
    bx = F.mul_coords(F.coords_table, b.coords())
    exps = (f.table - F.trace_coords(bx)) % p
    lhs = char_sum_counts(np.bincount(exps, minlength=p), p)
    try:
        xb = f.solve_xb(b)
    except NotInImage:
        return lhs, CycInt.integer(p, 0)
    rhs = pstar_power(p, f.rank) * CycInt.zeta(p, -f(xb)) * (f.sign * p ** (F.m - f.rank))
    return lhs, rhs


def verify_exp_sum(f, b) -> bool:
    lhs, rhs = exp_sum_sides(f, b)
    return lhs == rhs
