"""Exact arithmetic in V = Q(zeta_M) + Q(zeta_M)*sqrt(ell), and reduction mod m.

Elements are stored in canonical form: a sparse map exponent -> Fraction in
the power basis zeta_M^0 .. zeta_M^(phi(M)-1), reduced modulo Phi_M.  When
sqrt(ell) already lies in Q(zeta_M) (ell | M for ell = 1 mod 4, 4*ell | M
otherwise) it is folded into the a-part through the quadratic Gauss sum, so
the b-part stays empty and canonical forms remain unique.

Reduction uses Phi_M(x) = Phi_rad(x^(M/rad)): the exponent e = q*step + r is
canonical when q < phi(rad), otherwise y^q is rewritten modulo Phi_rad.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from . import _nt
from .errors import IncompatibleRingError, NotPIntegralError
from .finite_field import GF, element_of_order, find_irreducible


def _poly_div_exact(num, den):
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[:len(den) - 1]):
        raise ArithmeticError("inexact cyclotomic division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Integer coefficients of Phi_n, low degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in _nt.divisors(n):
        if d < n:
            num = _poly_div_exact(num, cyclotomic_poly(d))
    return tuple(num)


class CycRing:
    """The value ring for a cyclotomic order M and a base prime ell."""

    def __init__(self, M: int, ell: int):
        if M < 1 or ell < 2:
            raise ValueError("need M >= 1 and a prime ell")
        self.M = M
        self.ell = ell
        self.rad = _nt.radical(M)
        self.step = M // self.rad
        phi_rad = _nt.euler_phi(self.rad)
        self.phi_rad = phi_rad
        self.phi = phi_rad * self.step
        cp = cyclotomic_poly(self.rad)
        # rows q of y^q mod Phi_rad(y), q < rad
        table = np.zeros((self.rad, phi_rad), dtype=np.int64)
        cur = [0] * phi_rad
        cur[0] = 1
        for q in range(self.rad):
            table[q] = cur
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(phi_rad):
                    cur[i] -= top * cp[i]
        self.table = table
        self._sparse_rows = [
            [(c, int(v)) for c, v in enumerate(row) if v] for row in table.tolist()
        ]
        if ell % 4 == 1:
            self.folded = M % ell == 0
        else:
            self.folded = M % (4 * ell) == 0
        self._sqrt = None
        if self.folded:
            self._sqrt = self._gauss_sqrt()

    def __repr__(self):
        return f"CycRing(M={self.M}, ell={self.ell})"

    def __reduce__(self):
        return (get_ring, (self.M, self.ell))

    # canonical reduction -------------------------------------------------
    def canon(self, terms) -> dict:
        M, step, phir = self.M, self.step, self.phi_rad
        out = {}
        for e, c in terms.items():
            if not c:
                continue
            e %= M
            q, r = divmod(e, step)
            if q < phir:
                out[e] = out.get(e, 0) + c
            else:
                for cc, t in self._sparse_rows[q]:
                    k = r + cc * step
                    out[k] = out.get(k, 0) + c * t
        return {k: Fraction(v) for k, v in out.items() if v}

    def canon_dense(self, vec, den=1) -> dict:
        """Canonical form of sum_e vec[e] zeta^e / den for an integer vector of length M."""
        vec = np.asarray(vec)
        if vec.dtype != object and np.abs(vec).max(initial=0) > 2 ** 40:
            vec = vec.astype(object)
        table = self.table if vec.dtype != object else self.table.astype(object)
        folded = table.T.dot(vec.reshape(self.rad, self.step)).reshape(-1)
        nz = np.nonzero(folded)[0]
        return {int(k): Fraction(int(folded[k]), den) for k in nz}

    def _gauss_sqrt(self) -> dict:
        ell, M = self.ell, self.M
        terms = {}
        for a in range(1, ell):
            terms[a * (M // ell)] = _nt.legendre(a, ell)
        if ell % 4 == 3:
            # sqrt(ell) = -i * g with i = zeta_4
            terms = {(e + 3 * M // 4) % M: c for e, c in terms.items()}
        return self.canon(terms)

    # constructors --------------------------------------------------------
    def make(self, a=None, b=None) -> "CycNumber":
        a = self.canon(a or {})
        b = self.canon(b or {})
        if b and self.folded:
            a = _dict_add(a, _mul_terms(self, b, self._sqrt))
            b = {}
        return CycNumber(self, a, b)

    def zero(self):
        return CycNumber(self, {}, {})

    def one(self):
        return CycNumber(self, {0: Fraction(1)}, {})

    def rational(self, q):
        q = Fraction(q)
        return CycNumber(self, {0: q} if q else {}, {})

    def zeta(self, k: int = 1):
        """zeta_M^k."""
        return CycNumber(self, self.canon({k % self.M: 1}), {})

    def root_of_unity(self, num: int, den: int):
        """exp(2 pi i num/den); den must divide M."""
        if self.M % den:
            raise IncompatibleRingError(f"zeta_{den} is not in Q(zeta_{self.M})")
        return self.zeta(num * (self.M // den))

    def sqrt_ell(self):
        if self.folded:
            return CycNumber(self, dict(self._sqrt), {})
        return CycNumber(self, {}, {0: Fraction(1)})

    def ell_half_power(self, h: int):
        """ell^(h/2) for any integer h."""
        q, r = divmod(h, 2)
        base = self.rational(Fraction(self.ell) ** q)
        return base * self.sqrt_ell() if r else base

    def monomial(self, angle, half: int = 0, coeff=1):
        """coeff * exp(2 pi i angle) * ell^(half/2)."""
        angle = Fraction(angle) % 1
        if self.M % angle.denominator:
            raise IncompatibleRingError(
                f"root of unity of order {angle.denominator} is not in Q(zeta_{self.M})")
        k = angle.numerator * (self.M // angle.denominator)
        q, r = divmod(half, 2)
        c = Fraction(coeff) * Fraction(self.ell) ** q
        z = self.canon({k: c})
        if not r:
            return CycNumber(self, z, {})
        if self.folded:
            return CycNumber(self, _mul_terms(self, z, self._sqrt), {})
        return CycNumber(self, {}, z)

    def from_dense(self, vec, den=1, vec_b=None):
        a = self.canon_dense(vec, den)
        b = self.canon_dense(vec_b, den) if vec_b is not None else {}
        if b and self.folded:
            a = _dict_add(a, _mul_terms(self, b, self._sqrt))
            b = {}
        return CycNumber(self, a, b)


@lru_cache(maxsize=256)
def get_ring(M: int, ell: int) -> CycRing:
    return CycRing(M, ell)


def standard_ring(ell: int, *orders) -> CycRing:
    """Smallest ring containing sqrt(ell) folded and all given root-of-unity orders."""
    return get_ring(_nt.lcm(4 * ell, *[int(o) for o in orders]), ell)


def _dict_add(x, y, sign=1):
    out = dict(x)
    for k, v in y.items():
        nv = out.get(k, 0) + sign * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _mul_terms(ring, x, y):
    if not x or not y:
        return {}
    M = ring.M
    acc = {}
    if len(x) < len(y):
        x, y = y, x
    for e2, c2 in y.items():
        for e1, c1 in x.items():
            e = (e1 + e2) % M
            acc[e] = acc.get(e, 0) + c1 * c2
    return ring.canon(acc)


def _scale(x, c):
    return {k: v * c for k, v in x.items()} if c else {}


class CycNumber:
    """An immutable element a + b*sqrt(ell) with a, b in Q(zeta_M)."""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: CycRing, a: dict, b: dict):
        self.ring = ring
        self.a = a
        self.b = b

    # basic data --------------------------------------------------------
    @property
    def order(self):
        return self.ring.M

    @property
    def ell(self):
        return self.ring.ell

    def a_coeffs(self):
        v = [Fraction(0)] * self.ring.phi
        for k, c in self.a.items():
            v[k] = c
        return v

    def b_coeffs(self):
        v = [Fraction(0)] * self.ring.phi
        for k, c in self.b.items():
            v[k] = c
        return v

    def is_zero(self):
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not self.b and (not self.a or set(self.a) == {0})

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.a.get(0, Fraction(0))

    # coercion ------------------------------------------------------------
    def _other(self, y):
        if isinstance(y, CycNumber):
            if y.ring is not self.ring and (y.ring.M, y.ring.ell) != (self.ring.M, self.ring.ell):
                raise IncompatibleRingError(
                    f"ring mismatch: (M={self.ring.M}, ell={self.ring.ell}) vs "
                    f"(M={y.ring.M}, ell={y.ring.ell})")
            return y
        if isinstance(y, (int, Fraction)):
            return self.ring.rational(y)
        return NotImplemented

    # arithmetic ----------------------------------------------------------
    def __add__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return CycNumber(self.ring, _dict_add(self.a, y.a), _dict_add(self.b, y.b))

    __radd__ = __add__

    def __sub__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return CycNumber(self.ring, _dict_add(self.a, y.a, -1), _dict_add(self.b, y.b, -1))

    def __rsub__(self, y):
        return (-self) + y

    def __neg__(self):
        return CycNumber(self.ring, _scale(self.a, -1), _scale(self.b, -1))

    def __mul__(self, y):
        if isinstance(y, (int, Fraction)):
            c = Fraction(y)
            return CycNumber(self.ring, _scale(self.a, c), _scale(self.b, c))
        y = self._other(y)
        if y is NotImplemented:
            return y
        R = self.ring
        a = _mul_terms(R, self.a, y.a)
        if self.b and y.b:
            a = _dict_add(a, _scale(_mul_terms(R, self.b, y.b), R.ell))
        b = _dict_add(_mul_terms(R, self.a, y.b), _mul_terms(R, self.b, y.a))
        return CycNumber(R, a, b)

    __rmul__ = __mul__

    def __truediv__(self, y):
        if isinstance(y, (int, Fraction)):
            if y == 0:
                raise ZeroDivisionError("division by zero in the value ring")
            return self * (1 / Fraction(y))
        y = self._other(y)
        if y is NotImplemented:
            return y
        return self * y.inverse()

    def __rtruediv__(self, y):
        return self.ring.rational(y) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # automorphisms -------------------------------------------------------
    def galois(self, t: int, flip: bool = False):
        """sigma_t: zeta -> zeta^t; flip additionally sends sqrt(ell) -> -sqrt(ell)
        (only meaningful when sqrt(ell) is not folded)."""
        R = self.ring
        if gcd(t, R.M) != 1:
            raise ValueError("Galois parameter must be a unit mod M")
        a = R.canon({(k * t) % R.M: c for k, c in self.a.items()})
        b = R.canon({(k * t) % R.M: c for k, c in self.b.items()})
        if flip:
            b = _scale(b, -1)
        return CycNumber(R, a, b)

    def conj(self):
        """Complex conjugation: zeta -> zeta^-1, sqrt(ell) fixed."""
        return self.galois(-1)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by zero in the value ring")
        R = self.ring
        if not self.b and len(self.a) == 1:
            (e, c), = self.a.items()
            return CycNumber(R, R.canon({(-e) % R.M: 1 / c}), {})
        if not self.a and len(self.b) == 1:
            (e, c), = self.b.items()
            return CycNumber(R, {}, R.canon({(-e) % R.M: 1 / (c * R.ell)}))
        small = self.descend()
        if small.ring.M < R.M:
            return small.inverse().lift(R.M)
        conjugates = self._orbit()
        prod = R.one()
        for z in conjugates[1:]:
            prod = prod * z
        norm = self * prod
        if not norm.is_rational():
            raise ArithmeticError("orbit product is not rational")
        return prod * (1 / norm.rational_value())

    def _orbit(self, limit: int = 4096):
        R = self.ring
        gens = [(g, False) for g in _nt.unit_generators(R.M)]
        if not R.folded and self.b:
            gens.append((1, True))
        seen = {self._key(): self}
        frontier = [self]
        while frontier:
            nxt = []
            for z in frontier:
                for t, flip in gens:
                    w = z.galois(t, flip)
                    k = w._key()
                    if k not in seen:
                        seen[k] = w
                        nxt.append(w)
                        if len(seen) > limit:
                            raise ArithmeticError("Galois orbit too large to invert")
            frontier = nxt
        return list(seen.values())

    # change of ring ------------------------------------------------------
    def lift(self, M2: int) -> "CycNumber":
        R = self.ring
        if M2 == R.M:
            return self
        if M2 % R.M:
            raise IncompatibleRingError(f"Q(zeta_{R.M}) is not inside Q(zeta_{M2})")
        R2 = get_ring(M2, R.ell)
        d = M2 // R.M
        a = R2.canon({k * d: c for k, c in self.a.items()})
        b = R2.canon({k * d: c for k, c in self.b.items()})
        if b and R2.folded:
            a = _dict_add(a, _mul_terms(R2, b, R2._sqrt))
            b = {}
        return CycNumber(R2, a, b)

    def rebase(self, ell2: int, M2: int = None) -> "CycNumber":
        """The same element of Q(zeta_M2) viewed in a ring tagged with another base prime.

        Only folded values (no separate sqrt(ell) part) can move between tags."""
        if self.b:
            raise IncompatibleRingError("value carries an unfolded sqrt(ell) part")
        M2 = M2 or self.ring.M
        if M2 % self.ring.M:
            raise IncompatibleRingError(f"Q(zeta_{self.ring.M}) is not inside Q(zeta_{M2})")
        R2 = get_ring(M2, ell2)
        d = M2 // self.ring.M
        return CycNumber(R2, R2.canon({k * d: c for k, c in self.a.items()}), {})

    def descend(self) -> "CycNumber":
        """Re-express in the smallest subring Q(zeta_M') with the same radical."""
        R = self.ring
        g = R.step
        for k in self.a:
            g = gcd(g, k)
        for k in self.b:
            g = gcd(g, k)
        if g in (0, 1):
            return self
        R2 = get_ring(R.M // g, R.ell)
        a = {k // g: c for k, c in self.a.items()}
        b = {k // g: c for k, c in self.b.items()}
        if b and R2.folded:
            # cannot happen: a folded subring forces the big ring folded
            a = _dict_add(a, _mul_terms(R2, R2.canon(b), R2._sqrt))
            b = {}
        return CycNumber(R2, a, b)

    # comparison ----------------------------------------------------------
    def _key(self):
        return (tuple(sorted(self.a.items())), tuple(sorted(self.b.items())))

    def __eq__(self, y):
        if isinstance(y, (int, Fraction)):
            return self.is_rational() and self.rational_value() == y
        if not isinstance(y, CycNumber):
            return NotImplemented
        if y.ring.ell != self.ring.ell:
            return False
        if y.ring.M != self.ring.M:
            M = _nt.lcm(self.ring.M, y.ring.M)
            return self.lift(M)._key() == y.lift(M)._key()
        return self._key() == y._key()

    def __hash__(self):
        # equality lifts across rings, so only the rational part is hashed
        if self.is_rational():
            return hash(self.rational_value())
        return hash(("cyc", self.ring.ell))

    def __repr__(self):
        def fmt(d):
            return " + ".join(f"{c}*z^{k}" for k, c in sorted(d.items())) or "0"
        s = fmt(self.a)
        if self.b:
            s += f" + ({fmt(self.b)})*sqrt({self.ring.ell})"
        return f"CycNumber[M={self.ring.M}]({s})"

    # serialisation -------------------------------------------------------
    def to_json(self):
        R = self.ring
        enc = lambda v: [[c.numerator, c.denominator] for c in v]
        return {"M": R.M, "ell": R.ell, "a": enc(self.a_coeffs()), "b": enc(self.b_coeffs())}

    @staticmethod
    def from_json(obj) -> "CycNumber":
        R = get_ring(int(obj["M"]), int(obj["ell"]))
        dec = lambda v: {i: Fraction(int(n), int(d)) for i, (n, d) in enumerate(v) if n}
        a, b = dec(obj.get("a", [])), dec(obj.get("b", []))
        if max(list(a) + list(b) + [-1]) >= R.phi:
            raise ValueError("coefficient vector longer than phi(M)")
        return R.make(a, b)


def common_ring(*xs):
    """Lift values to the ring of the lcm of their orders."""
    M = _nt.lcm(*[x.ring.M for x in xs])
    return [x.lift(M) for x in xs]


def cyc_arith(x: CycNumber, y: CycNumber, op: str) -> CycNumber:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def cyc_conjugate(x: CycNumber) -> CycNumber:
    return x.conj()


class PrimeEmbedding:
    """A prime m above p in Q(zeta_N, sqrt(ell)), realised as zeta_N -> z in F_{p^k}.

    ``order`` is the root-of-unity order the embedding must serve.  Internally
    the p-prime part of lcm(order, 4*ell) is used so that sqrt(ell) is
    always the image of its Gauss-sum expression.  Values whose ring order
    carries a p-power factor are reduced with zeta_{p^j} -> 1; this is only
    allowed with ``allow_wild=True``.
    """

    def __init__(self, p: int, ell: int, order: int = 1, seed: int = 0,
                 allow_wild: bool = False):
        if not _nt.is_prime(p) or p == 2:
            raise ValueError("p must be an odd prime")
        if p == ell:
            raise ValueError("p must differ from ell")
        j, _ = _nt.p_part(order, p)
        if j and not allow_wild:
            raise ValueError(f"cyclotomic order {order} is divisible by p={p}")
        self.p = p
        self.ell = ell
        self.seed = seed
        self.allow_wild = allow_wild
        self.N = _nt.p_part(_nt.lcm(order, 4 * ell), p)[1]
        self.M = order
        self.k = _nt.mult_order(p, self.N)
        self.field = GF(p, find_irreducible(p, self.k, seed))
        self._z = element_of_order(self.field, self.N, seed)
        self._tables = {}
        self._sqrt_image = None

    def __repr__(self):
        return f"PrimeEmbedding(p={self.p}, ell={self.ell}, N={self.N}, k={self.k})"

    def _zeta_arr(self, M: int):
        j, Mp = _nt.p_part(M, self.p)
        if self.N % Mp:
            raise IncompatibleRingError(
                f"embedding of order {self.N} does not cover zeta_{M}")
        if j and not self.allow_wild:
            raise ValueError(f"order {M} divisible by p={self.p}; wild reduction not enabled")
        u = pow(self.p ** j, -1, Mp) if Mp > 1 else 0
        return self.field.pow_arr(self._z, ((self.N // Mp) * u) % self.N)

    def zeta_image(self, M: int = None):
        return self._wrap(self._zeta_arr(M or self.M))

    def _table(self, M):
        t = self._tables.get(M)
        if t is None:
            z = self._zeta_arr(M)
            t = np.zeros((M, self.field.k), dtype=np.int64)
            cur = self.field.one_arr()
            for e in range(M):
                t[e] = cur
                cur = self.field.mul_arr(cur, z)
            self._tables[M] = t
        return t

    def _wrap(self, arr):
        from .finite_field import FFElem
        return FFElem(self.field, arr)

    def _eval_terms(self, terms, M):
        p = self.p
        if not terms:
            return self.field.zero_arr()
        exps = np.fromiter(terms.keys(), dtype=np.int64, count=len(terms))
        coeffs = []
        for c in terms.values():
            if c.denominator % p == 0:
                raise NotPIntegralError(f"denominator {c.denominator} divisible by p={p}")
            coeffs.append(c.numerator % p * pow(c.denominator, -1, p) % p)
        coeffs = np.array(coeffs, dtype=np.int64)
        rows = self._table(M)[exps]
        return (coeffs @ rows) % p

    def sqrt_ell_image(self):
        if self._sqrt_image is None:
            R = get_ring(self.N, self.ell)
            self._sqrt_image = self._eval_terms(R._sqrt, self.N)
        return self._wrap(self._sqrt_image)

    def reduce(self, x: CycNumber):
        if x.ring.ell != self.ell:
            raise IncompatibleRingError("base prime mismatch")
        x = x.descend()
        M = x.ring.M
        val = self._eval_terms(x.a, M)
        if x.b:
            bv = self._eval_terms(x.b, M)
            self.sqrt_ell_image()
            val = (val + self.field.mul_arr(bv, self._sqrt_image)) % self.p
        return self._wrap(val)

    def residue_minpoly(self, M: int = None):
        """Minimal polynomial of zeta_image(M) over F_p (low degree first)."""
        M = M or self.M
        z = self._zeta_arr(M)
        conj = []
        cur = z
        while True:
            conj.append(cur)
            cur = self.field.pow_arr(cur, self.p)
            if np.array_equal(cur, z):
                break
        poly = [self.field.one_arr()]
        for c in conj:
            neg = (-c) % self.p
            new = [self.field.zero_arr() for _ in range(len(poly) + 1)]
            for i, coef in enumerate(poly):
                new[i + 1] = (new[i + 1] + coef) % self.p
                new[i] = (new[i] + self.field.mul_arr(coef, neg)) % self.p
            poly = new
        return tuple(int(c[0]) for c in poly)

    def to_json(self):
        return {"p": self.p, "ell": self.ell, "N": self.N, "k": self.k,
                "field_modulus": list(self.field.modulus), "seed": self.seed,
                "zeta_image": list(int(c) for c in self._z),
                "sqrt_ell_image": self.sqrt_ell_image().to_json()}


def reduce_mod_m(x: CycNumber, emb: PrimeEmbedding):
    return emb.reduce(x)


def is_nonzero_mod_m(x: CycNumber, emb: PrimeEmbedding) -> bool:
    return not emb.reduce(x).is_zero()
