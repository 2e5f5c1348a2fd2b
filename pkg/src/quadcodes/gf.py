"""Arithmetic in F_p and GF(p^m).

Elements of GF(p^m) are coefficient vectors (c_0, ..., c_{m-1}) in the
polynomial basis 1, t, ..., t^{m-1}, where t is a root of the field's
modulus.  The modulus is the lexicographically smallest monic irreducible
polynomial of degree m, coefficients compared low-degree first, so every
number computed downstream is reproducible.

Elements are ordered coordinate-lexicographically: c_0 is the most
significant digit, so the integer index of an element is
``sum(c_i * p**(m-1-i))``.  All tables indexed by field elements use this
order.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import FieldMismatch, LengthMismatch, NotOddPrime, SizeGuardExceeded

DEFAULT_MAX_FIELD = 10**6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def check_odd_prime(p) -> int:
    if not isinstance(p, (int, np.integer)) or p < 3 or not is_prime(int(p)):
        raise NotOddPrime(f"{p!r} is not an odd prime")
    return int(p)


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low-degree first

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, f, p):
    """Remainder of a modulo f (f need not be monic)."""
    a = _trim(x % p for x in a)
    f = _trim(f)
    df = len(f) - 1
    lead_inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        a = _trim(a)
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_mod(a, b, p)
    return a


def is_irreducible(f, p) -> bool:
    """No factor of degree <= m/2 (hence irreducible); f monic of degree m."""
    f = _trim(f)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    h = [0, 1]  # x
    for _ in range(1, m // 2 + 1):
        # h <- h^p mod f, i.e. x^{p^d} mod f
        acc = [1]
        base = h
        e = p
        while e:
            if e & 1:
                acc = poly_mod(poly_mul(acc, base, p), f, p)
            base = poly_mod(poly_mul(base, base, p), f, p)
            e >>= 1
        h = acc
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = poly_gcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=m):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


# --------------------------------------------------------------------------


class ExtensionField:
    """GF(p^m) with an explicit monic irreducible modulus.

    Immutable after construction; bulk tables are cached lazily.
    """

    def __init__(self, p: int, m: int, modulus=None, *, max_size: int = DEFAULT_MAX_FIELD):
        p = check_odd_prime(p)
        if m < 1:
            raise ValueError(f"degree must be positive, got {m}")
        if p**m > max_size:
            raise SizeGuardExceeded(f"GF({p}^{m})", p**m, max_size)
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {m}: {modulus}")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        # coordinates of t^k for k < 2m-1, used to reduce products
        powers = [[0] * m for _ in range(2 * m - 1)]
        cur = [1] + [0] * (m - 1)
        for k in range(2 * m - 1):
            powers[k] = list(cur)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * modulus[i]) % p for i, c in enumerate(cur)]
        self._powers = np.array(powers, dtype=np.int64)
        self._weights = np.array([p ** (m - 1 - i) for i in range(m)], dtype=np.int64)

    def __repr__(self):
        return f"ExtensionField(p={self.p}, m={self.m}, modulus={self.modulus})"

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __len__(self):
        return self.q

    # -- element construction ----------------------------------------------

    def __call__(self, value) -> FieldElement:
        """Element from an int in the prime subfield or a coordinate sequence."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement((int(value) % self.p,) + (0,) * (self.m - 1), self)
        return self.from_coords(value)

    def from_coords(self, v) -> FieldElement:
        v = tuple(int(c) % self.p for c in v)
        if len(v) != self.m:
            raise LengthMismatch(f"expected {self.m} coordinates, got {len(v)}")
        return FieldElement(v, self)

    def element(self, index: int) -> FieldElement:
        return FieldElement(tuple(int(c) for c in self.coords_table[index]), self)

    def zero(self) -> FieldElement:
        return self(0)

    def one(self) -> FieldElement:
        return self(1)

    def gen(self) -> FieldElement:
        """The root t of the modulus (for m = 1 this is 0, the root of x)."""
        if self.m == 1:
            return self(-self.modulus[0])
        return self.from_coords([0, 1] + [0] * (self.m - 2))

    def elements(self):
        for i in range(self.q):
            yield self.element(i)

    # -- bulk tables -----------------------------------------------------------

    @functools.cached_property
    def coords_table(self) -> np.ndarray:
        idx = np.arange(self.q, dtype=np.int64)
        return (idx[:, None] // self._weights[None, :]) % self.p

    def index(self, coords) -> np.ndarray:
        return (np.asarray(coords, dtype=np.int64) % self.p) @ self._weights

    def mul_coords(self, x, y) -> np.ndarray:
        """Vectorized product of coordinate arrays of shape (..., m)."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        m = self.m
        shape = np.broadcast_shapes(x.shape, y.shape)
        conv = np.zeros(shape[:-1] + (2 * m - 1,), dtype=np.int64)
        for i in range(m):
            conv[..., i:i + m] += x[..., i:i + 1] * y
        return (conv % self.p) @ self._powers % self.p

    @functools.cached_property
    def trace_vector(self) -> np.ndarray:
        """Tr(t^i) for i < m, from the definition as a sum of conjugates."""
        return np.array([self.gen_power(i).trace() for i in range(self.m)], dtype=np.int64)

    def gen_power(self, i: int) -> FieldElement:
        return FieldElement(tuple(int(c) for c in self._powers[i]), self) if i < 2 * self.m - 1 else self.gen() ** i

    @functools.cached_property
    def trace_gram(self) -> np.ndarray:
        """Matrix (Tr(t^i t^j)); Tr(xy) = X @ trace_gram @ Y."""
        m = self.m
        return np.array(
            [[int(self._powers[i + j] @ self.trace_vector % self.p) for j in range(m)] for i in range(m)],
            dtype=np.int64,
        )

    def trace_coords(self, x) -> np.ndarray:
        return np.asarray(x, dtype=np.int64) @ self.trace_vector % self.p

    @functools.cached_property
    def trace_table(self) -> np.ndarray:
        return self.trace_coords(self.coords_table)

    # -- serialization ---------------------------------------------------------

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def to_json(self) -> str:
        return json.dumps(self.descriptor())

    @classmethod
    def from_descriptor(cls, d: dict, **kw) -> ExtensionField:
        return cls(int(d["p"]), int(d["m"]), tuple(d["modulus"]), **kw)


@functools.lru_cache(maxsize=None)
def _cached_field(p, m, max_size):
    return ExtensionField(p, m, max_size=max_size)


def make_field(p: int, m: int, *, max_size: int = DEFAULT_MAX_FIELD) -> ExtensionField:
    """GF(p^m) with the lexicographically smallest monic irreducible modulus."""
    p = check_odd_prime(p)
    if p**m > max_size:
        raise SizeGuardExceeded(f"GF({p}^{m})", p**m, max_size)
    return _cached_field(p, m, max_size)


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple
    field: ExtensionField

    def _check(self, other) -> FieldElement:
        if isinstance(other, (int, np.integer)):
            return self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(tuple(-a % p for a in self.coeffs), self.field)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        p, m = F.p, F.m
        conv = [0] * (2 * m - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    conv[i + j] += a * b
        out = [0] * m
        for k, c in enumerate(conv):
            if c % p:
                row = F._powers[k]
                for i in range(m):
                    out[i] += c * int(row[i])
        return FieldElement(tuple(c % p for c in out), F)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def frobenius(self) -> FieldElement:
        return self ** self.field.p

    def trace(self) -> int:
        """x + x^p + ... + x^{p^{m-1}}, returned as an int in [0, p)."""
        acc = self
        y = self
        for _ in range(self.field.m - 1):
            y = y.frobenius()
            acc = acc + y
        assert all(c == 0 for c in acc.coeffs[1:]), "trace left the prime subfield"
        return acc.coeffs[0]

    def coords(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    @property
    def index(self) -> int:
        return int(self.field.index(self.coeffs))

    def order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.field.q - 1
        for ell in prime_factors(n):
            while n % ell == 0 and (self ** (n // ell)) == self.field.one():
                n //= ell
        return n

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return " + ".join(terms) or "0"


def coords(x: FieldElement) -> np.ndarray:
    return x.coords()


def from_coords(field: ExtensionField, v) -> FieldElement:
    return field.from_coords(v)


def trace(x: FieldElement) -> int:
    return x.trace()


def primitive_element(field: ExtensionField) -> FieldElement:
    """Smallest element (coordinate-lexicographic) of multiplicative order q-1."""
    for i in range(1, field.q):
        x = field.element(i)
        if x.order() == field.q - 1:
            return x
    raise AssertionError("unreachable: GF(q)* is cyclic")
