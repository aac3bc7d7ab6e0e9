"""Finite fields F_p[x]/(h) with numpy-backed arithmetic.

Elements are length-k coefficient vectors (low degree first).  The public
wrapper ``FFElem`` is immutable and hashable; the field object also exposes
raw array operations used by the power tables of ``PrimeEmbedding``.
"""
import random

import numpy as np

from ._nt import factor, primes_of


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a, b, p):
    """Division with remainder in F_p[x]; lists low degree first."""
    a = [int(c) % p for c in a]
    b = _trim([int(c) % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    a = _trim(a)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a = _trim(a)
    return _trim(q), a


def poly_gcd(a, b, p):
    a, b = _trim([int(c) % p for c in a]), _trim([int(c) % p for c in b])
    while b:
        _, r = poly_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


class GF:
    """The field with p^k elements presented as F_p[x]/(h)."""

    def __init__(self, p: int, modulus):
        modulus = [int(c) % p for c in modulus]
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.p = p
        self.k = len(modulus) - 1
        self.modulus = tuple(modulus)
        k = self.k
        # rows: x^(k+i) mod h for i < k-1, used to fold high products back
        red = np.zeros((max(k - 1, 0), k), dtype=np.int64)
        cur = np.array([(-c) % p for c in modulus[:-1]], dtype=np.int64)
        for i in range(k - 1):
            red[i] = cur
            top = cur[-1]
            cur = np.concatenate(([0], cur[:-1]))
            cur = (cur + top * red[0]) % p
        self._red = red

    # raw array arithmetic -------------------------------------------------
    def zero_arr(self):
        return np.zeros(self.k, dtype=np.int64)

    def one_arr(self):
        a = self.zero_arr()
        a[0] = 1
        return a

    def mul_arr(self, a, b):
        prod = np.convolve(a, b) % self.p
        k = self.k
        if k == 1:
            return prod[:1] % self.p
        out = prod[:k].copy()
        out += prod[k:] @ self._red
        return out % self.p

    def pow_arr(self, a, n: int):
        result = self.one_arr()
        base = a.copy()
        while n:
            if n & 1:
                result = self.mul_arr(result, base)
            base = self.mul_arr(base, base)
            n >>= 1
        return result

    def inv_arr(self, a):
        if not a.any():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.pow_arr(a, self.p ** self.k - 2)

    # public wrappers ------------------------------------------------------
    def __call__(self, coeffs):
        arr = self.zero_arr()
        if isinstance(coeffs, int):
            arr[0] = coeffs % self.p
        else:
            cs = [int(c) % self.p for c in coeffs]
            if len(cs) > self.k:
                cs = poly_divmod(cs, self.modulus, self.p)[1]
            arr[:len(cs)] = cs
        return FFElem(self, arr)

    def gen(self):
        return self([0, 1]) if self.k > 1 else self(-self.modulus[0])

    @property
    def order(self):
        return self.p ** self.k

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})"


class FFElem:
    __slots__ = ("field", "c")

    def __init__(self, field, arr):
        self.field = field
        self.c = tuple(int(x) for x in arr)

    def _arr(self):
        return np.array(self.c, dtype=np.int64)

    def _wrap(self, arr):
        return FFElem(self.field, arr)

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        return self._wrap((self._arr() + o._arr()) % self.field.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return self._wrap((self._arr() - o._arr()) % self.field.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return self._wrap((-self._arr()) % self.field.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return self._wrap(self.field.mul_arr(self._arr(), o._arr()))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self._wrap(self.field.pow_arr(self._arr(), n))

    def inverse(self):
        return self._wrap(self.field.inv_arr(self._arr()))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_zero(self):
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, FFElem)):
            o = self._coerce(other)
            return self.c == o.c
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.c))

    def __repr__(self):
        return f"FFElem({list(self.c)} mod {self.field.p})"

    def to_json(self):
        return list(self.c)


def _frobenius_powers_fixed(field, k):
    """Rabin test helper: x^(p^i) mod h for i = 1..k."""
    x = field.zero_arr()
    if field.k > 1:
        x[1] = 1
    else:
        x[0] = (-field.modulus[0]) % field.p
    out = []
    cur = x
    for _ in range(k):
        cur = field.pow_arr(cur, field.p)
        out.append(cur)
    return x, out


def is_irreducible(poly, p) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    poly = [c % p for c in poly]
    k = len(poly) - 1
    if k == 1:
        return True
    if poly[0] == 0:
        return False
    R = GF(p, poly)
    x, pw = _frobenius_powers_fixed(R, k)
    if not np.array_equal(pw[k - 1], x):
        return False
    for r in primes_of(k):
        t = pw[k // r - 1].copy()
        t[1] = (t[1] - 1) % p
        if len(poly_gcd(list(t), poly, p)) > 1:
            return False
    return True


def find_irreducible(p: int, k: int, seed: int = 0):
    """A seeded, reproducible search for a monic irreducible of degree k."""
    if k == 1:
        return (0, 1)
    rng = random.Random(f"irreducible/{p}/{k}/{seed}")
    while True:
        low = [rng.randrange(p) for _ in range(k)]
        if low[0] == 0:
            continue
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)


def element_of_order(field: GF, n: int, seed: int = 0):
    """A seeded choice of an element of exact multiplicative order n."""
    q1 = field.order - 1
    if q1 % n:
        raise ValueError(f"{n} does not divide the order of the unit group")
    rng = random.Random(f"order/{field.p}/{field.modulus}/{n}/{seed}")
    qs = [r for r, _ in factor(n)] if n > 1 else []
    while True:
        a = np.array([rng.randrange(field.p) for _ in range(field.k)], dtype=np.int64)
        if not a.any():
            continue
        b = field.pow_arr(a, q1 // n)
        if all(not np.array_equal(field.pow_arr(b, n // r), field.one_arr()) for r in qs):
            return b
