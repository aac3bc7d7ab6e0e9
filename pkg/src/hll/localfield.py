"""Unramified F/Q_ell, the quadratic algebra E/F, additive characters and unit groups.

F is presented as Z_ell[X]/(lift_poly) with lift_poly monic and irreducible
mod ell, so ell is a uniformizer and {1, X, ..., X^(f-1)} is an integral
basis.  Nonsplit E is F(theta) with theta^2 = -D; for ell odd the conjugate of
theta is -theta, so t = 0 and delta = 2 theta.  In the ramified kind theta is
a uniformizer of E.

Sign convention for psi: psi(x) = exp(-2 pi i {Tr x}), the local component at
ell of the adelic character of A_Q/Q that is exp(2 pi i x) at infinity, so
psi(1/ell) = zeta_ell^-1 and psi0(x) = psi(-x/d_F).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _nt
from .cyclotomic import CycNumber, standard_ring
from .errors import HypothesisError, LevelError, PrecisionError, SchemaError
from .finite_field import is_irreducible
from .settings import check_bound

INF = math.inf


# ---------------------------------------------------------------------------
# integral arithmetic in O = Z[X]/(lift_poly), coefficient tuples
# ---------------------------------------------------------------------------

def _vmod(x, m):
    return tuple(int(c) % m for c in x)


def _ell_val_int(n: int, ell: int) -> int:
    if n == 0:
        return INF
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def _vec_val(x, ell) -> float:
    return min((_ell_val_int(int(c), ell) for c in x), default=INF)


@dataclass(frozen=True)
class LocalFieldDesc:
    """An unramified extension F of Q_ell of degree f."""

    ell: int
    f: int = 1
    n_max: int = 12
    lift_poly: tuple = None
    d_F: tuple = None

    def __post_init__(self):
        ell, f = self.ell, self.f
        if not _nt.is_prime(ell) or ell == 2:
            raise SchemaError("ell must be an odd prime")
        if f < 1:
            raise SchemaError("residue degree f must be >= 1")
        lp = self.lift_poly
        if lp is None:
            lp = _default_lift_poly(ell, f)
        lp = tuple(int(c) for c in lp)
        if len(lp) != f + 1 or lp[-1] != 1:
            raise SchemaError("lift_poly must be monic of degree f")
        if not is_irreducible(list(lp), ell):
            raise SchemaError("lift_poly must be irreducible mod ell")
        object.__setattr__(self, "lift_poly", lp)
        d = self.d_F
        if d is None:
            d = (1,) + (0,) * (f - 1)
        d = tuple(int(c) for c in d) + (0,) * (f - len(tuple(d)))
        if len(d) != f or all(c % ell == 0 for c in d):
            raise SchemaError("d_F must be a unit of O")
        object.__setattr__(self, "d_F", d)

    @property
    def q(self) -> int:
        return self.ell ** self.f

    # coefficient arithmetic --------------------------------------------
    def mul(self, x, y, m: int):
        f = self.f
        c = [0] * (2 * f - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    c[i + j] += a * b
        lp = self.lift_poly
        for k in range(2 * f - 2, f - 1, -1):
            t = c[k]
            if t:
                for i in range(f):
                    c[k - f + i] -= t * lp[i]
        return tuple(v % m for v in c[:f])

    def inv_unit(self, u, n: int):
        """Inverse of a unit of O modulo ell^n (Newton iteration)."""
        ell = self.ell
        if all(c % ell == 0 for c in u):
            raise ZeroDivisionError("not a unit")
        if self.f == 1:
            return (pow(int(u[0]), -1, ell ** n),)
        from .finite_field import GF
        K = GF(ell, self.lift_poly)
        y = K(list(u)).inverse().c
        prec = 1
        one = (1,) + (0,) * (self.f - 1)
        while prec < n:
            prec = min(2 * prec, n)
            m = ell ** prec
            xy = self.mul(u, y, m)
            two_minus = tuple((2 * o - a) % m for o, a in zip(one, xy))
            y = self.mul(y, two_minus, m)
        return _vmod(y, ell ** n)

    def mult_matrix(self, c, m: int) -> np.ndarray:
        """Matrix A with (c*x) coefficients = A @ x (mod m)."""
        f = self.f
        A = np.zeros((f, f), dtype=np.int64)
        for i in range(f):
            e = [0] * f
            e[i] = 1
            A[:, i] = self.mul(c, tuple(e), m)
        return A

    @property
    def trace_basis(self) -> tuple:
        """Tr_{F/Q_ell}(X^i) for i < f."""
        return _trace_basis(self.lift_poly)

    def trace(self, x) -> int:
        return sum(int(a) * t for a, t in zip(x, self.trace_basis))

    def trace_functional(self, c, m: int) -> np.ndarray:
        """lambda with Tr(c * x) = lambda . x (mod m)."""
        A = self.mult_matrix(c, m)
        tb = np.array(self.trace_basis, dtype=np.int64) % m
        return (tb @ A) % m

    def to_json(self):
        return {"ell": self.ell, "f": self.f, "n_max": self.n_max,
                "lift_poly": list(self.lift_poly), "d_F": list(self.d_F)}


@lru_cache(maxsize=None)
def _trace_basis(lp) -> tuple:
    f = len(lp) - 1
    # companion matrix of X, exact integers
    C = [[0] * f for _ in range(f)]
    for i in range(1, f):
        C[i][i - 1] = 1
    for i in range(f):
        C[i][f - 1] = -lp[i]
    out = []
    P = [[int(i == j) for j in range(f)] for i in range(f)]
    for _ in range(f):
        out.append(sum(P[i][i] for i in range(f)))
        P = [[sum(P[i][k] * C[k][j] for k in range(f)) for j in range(f)] for i in range(f)]
    return tuple(out)


@lru_cache(maxsize=None)
def _default_lift_poly(ell: int, f: int) -> tuple:
    if f == 1:
        return (0, 1)
    import itertools
    for low in itertools.product(range(ell), repeat=f):
        poly = tuple(low[::-1]) + (1,)
        if poly[0] and is_irreducible(list(poly), ell):
            return poly
    raise SchemaError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# elements of F
# ---------------------------------------------------------------------------

class LocalElement:
    """ell^val * unit + O(ell^(val+prec)).  Exact zero has val = inf; prec = 0
    marks an element only known to lie in ell^val O."""

    __slots__ = ("F", "val", "unit", "prec")

    def __init__(self, F: LocalFieldDesc, val, unit, prec: int):
        self.F = F
        self.val = val
        self.prec = prec
        if val is INF:
            self.unit = (0,) * F.f
        else:
            self.unit = _vmod(unit, F.ell ** prec) if prec else (0,) * F.f
            if prec and all(c % F.ell == 0 for c in self.unit):
                raise ValueError("unit part is not a unit")

    # constructors --------------------------------------------------------
    @staticmethod
    def zero(F):
        return LocalElement(F, INF, None, _nmax(F))

    @staticmethod
    def one(F):
        return LocalElement.from_int(F, 1)

    @staticmethod
    def from_int(F, n: int, prec: int = None):
        return LocalElement.from_fraction(F, Fraction(n), prec)

    @staticmethod
    def from_fraction(F, q, prec: int = None):
        q = Fraction(q)
        prec = _nmax(F) if prec is None else prec
        if prec > _nmax(F):
            raise PrecisionError(f"precision {prec} exceeds n_max={_nmax(F)}")
        if q == 0:
            return LocalElement.zero(F)
        ell = F.ell
        num, den = q.numerator, q.denominator
        v = 0
        while num % ell == 0:
            num //= ell
            v += 1
        while den % ell == 0:
            den //= ell
            v -= 1
        m = ell ** prec
        u = num * pow(den, -1, m) % m
        return LocalElement(F, v, (u,) + (0,) * (F.f - 1), prec)

    @staticmethod
    def from_coeffs(F, coeffs, val_shift: int = 0, prec: int = None):
        """ell^val_shift * sum coeffs[i] X^i for integer coefficients."""
        coeffs = tuple(int(c) for c in coeffs) + (0,) * (F.f - len(tuple(coeffs)))
        prec = _nmax(F) if prec is None else prec
        v = _vec_val(coeffs, F.ell)
        if v is INF:
            return LocalElement.zero(F)
        unit = tuple(c // F.ell ** v for c in coeffs)
        return LocalElement(F, v + val_shift, unit, prec)

    @staticmethod
    def from_unit(F, val: int, unit, prec: int = None):
        prec = _nmax(F) if prec is None else prec
        return LocalElement(F, val, tuple(unit) + (0,) * (F.f - len(tuple(unit))), prec)

    # predicates ----------------------------------------------------------
    def is_zero(self):
        return self.val is INF

    def is_approx_zero(self):
        return self.val is not INF and self.prec == 0

    def valuation(self):
        if self.is_approx_zero():
            raise PrecisionError("valuation not determined at this precision")
        return self.val

    @property
    def abs_prec(self):
        return INF if self.val is INF else self.val + self.prec

    # arithmetic ----------------------------------------------------------
    def _check(self, y):
        if isinstance(y, (int, Fraction)):
            return LocalElement.from_fraction(self.F, y)
        if not isinstance(y, LocalElement) or y.F != self.F:
            raise ValueError("elements of different fields")
        return y

    def __neg__(self):
        if self.val is INF or self.prec == 0:
            return self
        m = self.F.ell ** self.prec
        return LocalElement(self.F, self.val, tuple(-c % m for c in self.unit), self.prec)

    def __add__(self, y):
        y = self._check(y)
        x = self
        if x.val is INF:
            return y
        if y.val is INF:
            return x
        if y.val < x.val:
            x, y = y, x
        ell = self.F.ell
        A = min(x.abs_prec, y.abs_prec)
        n = A - x.val
        if n <= 0:
            return LocalElement(self.F, A, None, 0)
        m = ell ** n
        shift = ell ** (y.val - x.val)
        s = tuple((a + shift * b) % m for a, b in zip(x.unit, y.unit))
        t = _vec_val(s, ell)
        if t is INF or t >= n:
            return LocalElement(self.F, A, None, 0)
        unit = tuple(c // ell ** t for c in s)
        return LocalElement(self.F, x.val + t, unit, n - t)

    __radd__ = __add__

    def __sub__(self, y):
        return self + (-self._check(y))

    def __rsub__(self, y):
        return self._check(y) - self

    def __mul__(self, y):
        y = self._check(y)
        if self.val is INF or y.val is INF:
            return LocalElement.zero(self.F)
        prec = min(self.prec, y.prec)
        val = self.val + y.val
        if prec == 0:
            return LocalElement(self.F, val, None, 0)
        unit = self.F.mul(self.unit, y.unit, self.F.ell ** prec)
        return LocalElement(self.F, val, unit, prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.val is INF:
            raise ZeroDivisionError("inverse of zero")
        if self.prec == 0:
            raise PrecisionError("division by an approximate zero")
        return LocalElement(self.F, -self.val, self.F.inv_unit(self.unit, self.prec), self.prec)

    def __truediv__(self, y):
        return self * self._check(y).inverse()

    def __rtruediv__(self, y):
        return self._check(y) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r = LocalElement.one(self.F)
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, y):
        if isinstance(y, (int, Fraction)):
            y = LocalElement.from_fraction(self.F, y)
        if not isinstance(y, LocalElement):
            return NotImplemented
        d = self - y
        return d.val is INF or d.prec == 0

    def __hash__(self):
        return hash((self.F, self.val))

    def truncate(self, prec: int):
        """Reduce relative precision (for precision-monotonicity checks)."""
        if self.val is INF or prec >= self.prec:
            return self
        return LocalElement(self.F, self.val, self.unit, prec)

    def integral_coeffs(self, n: int):
        """Coefficients of self modulo ell^n (self must be integral)."""
        if self.val is INF:
            return (0,) * self.F.f
        if self.val < 0:
            raise ValueError("element is not integral")
        if self.abs_prec < n:
            raise PrecisionError(f"element known only modulo ell^{self.abs_prec}")
        m = self.F.ell ** n
        s = self.F.ell ** self.val
        return tuple(c * s % m for c in self.unit)

    def unit_coeffs(self, n: int):
        if self.prec < n:
            raise PrecisionError(f"unit part known only modulo ell^{self.prec}, need {n}")
        m = self.F.ell ** n
        return tuple(c % m for c in self.unit)

    def __repr__(self):
        if self.val is INF:
            return "LocalElement(0)"
        return f"LocalElement(ell^{self.val} * {list(self.unit)} + O(rel {self.prec}))"

    def to_json(self):
        if self.val is INF:
            return {"zero": True}
        return {"val": self.val, "unit": list(self.unit), "prec": self.prec}

    @staticmethod
    def from_json(F, obj):
        if obj.get("zero"):
            return LocalElement.zero(F)
        if "rational" in obj:
            num, den = obj["rational"]
            return LocalElement.from_fraction(F, Fraction(int(num), int(den)), obj.get("prec"))
        return LocalElement.from_unit(F, int(obj["val"]), [int(c) for c in obj["unit"]],
                                      obj.get("prec"))


def _nmax(F):
    from .settings import settings
    return settings.precision or F.n_max


def lf_arith(x: LocalElement, y: LocalElement, op: str) -> LocalElement:
    return {"add": x.__add__, "sub": x.__sub__, "mul": x.__mul__,
            "div": x.__truediv__}[op](y)


# ---------------------------------------------------------------------------
# quadratic algebra E/F
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadExtDesc:
    """E = F(theta), theta^2 = theta_sq (nonsplit), or E = F + F (split).

    vartheta: nonsplit places use vartheta = theta * d_F * lam with lam given
    by (lam_val, lam_unit); then delta = 2 vartheta / d_F holds when lam = 1.
    Split places use vartheta = -vartheta_w e_wbar + vartheta_w e_w, with
    vartheta_w = (val, unit) defaulting to -d_F / 2.
    """

    base: LocalFieldDesc
    kind: str
    theta_sq: tuple = None
    lam_val: int = 0
    lam_unit: tuple = None
    vartheta_w: tuple = None

    def __post_init__(self):
        F = self.base
        if self.kind not in ("split", "inert", "ramified"):
            raise SchemaError(f"unknown kind {self.kind!r}")
        if self.kind != "split":
            if self.theta_sq is None:
                raise SchemaError("nonsplit kinds need theta_sq")
            ts = tuple(int(c) for c in self.theta_sq) + (0,) * (F.f - len(tuple(self.theta_sq)))
            object.__setattr__(self, "theta_sq", ts)
            v = _vec_val(ts, F.ell)
            if self.kind == "ramified" and v != 1:
                raise SchemaError("ramified kind needs v(theta^2) = 1 so theta is a uniformizer")
            if self.kind == "inert":
                if v != 0:
                    raise SchemaError("inert kind needs theta^2 a unit")
                if _is_square_residue(F, ts):
                    raise SchemaError("inert kind needs theta^2 a non-square mod ell")
        lu = self.lam_unit if self.lam_unit is not None else (1,)
        object.__setattr__(self, "lam_unit", tuple(int(c) for c in lu) + (0,) * (F.f - len(tuple(lu))))
        if self.kind == "split":
            vw = self.vartheta_w
            if vw is None:
                m = F.ell ** _nmax(F)
                half = pow(2, -1, m)
                vw = (0, tuple((-c * half) % m for c in F.d_F))
            object.__setattr__(self, "vartheta_w", (int(vw[0]), tuple(int(c) for c in vw[1])))

    @property
    def e(self) -> int:
        return 2 if self.kind == "ramified" else 1

    @property
    def D(self):
        """D = -theta^2 as coefficient tuple."""
        return tuple(-c for c in self.theta_sq)

    @property
    def q_E(self) -> int:
        q = self.base.q
        return q * q if self.kind == "inert" else q

    @property
    def f_E(self) -> int:
        """exponent with q_E = ell^f_E."""
        return 2 * self.base.f if self.kind == "inert" else self.base.f

    def level_split(self, n: int):
        """(nx, ny): O_E / varpi_E^n = {x mod ell^nx, y mod ell^ny}."""
        if self.kind == "inert":
            return n, n
        return (n + 1) // 2, n // 2

    def theta(self) -> "QuadElement":
        F = self.base
        return QuadElement(self, LocalElement.zero(F), LocalElement.one(F))

    def lam(self) -> LocalElement:
        return LocalElement.from_unit(self.base, self.lam_val, self.lam_unit)

    def vartheta(self) -> "QuadElement":
        F = self.base
        if self.kind == "split":
            v, u = self.vartheta_w
            t = LocalElement.from_unit(F, v, u)
            return QuadElement(self, t, -t)  # (w, wbar) components
        d = LocalElement.from_unit(F, 0, F.d_F)
        return QuadElement(self, LocalElement.zero(F), d * self.lam())

    def v_cR(self) -> int:
        """valuation of 2 vartheta / (delta d_F) = lam."""
        return self.lam_val

    def embed(self, x: LocalElement) -> "QuadElement":
        if self.kind == "split":
            return QuadElement(self, x, x)
        return QuadElement(self, x, LocalElement.zero(self.base))

    def to_json(self):
        out = {"base": self.base.to_json(), "kind": self.kind}
        if self.kind != "split":
            out["theta_sq"] = list(self.theta_sq)
            out["lam"] = {"val": self.lam_val, "unit": list(self.lam_unit)}
        else:
            out["vartheta_w"] = {"val": self.vartheta_w[0], "unit": list(self.vartheta_w[1])}
        return out


def _is_square_residue(F, x) -> bool:
    from .finite_field import GF
    K = GF(F.ell, F.lift_poly)
    a = K(list(x))
    return a.is_zero() or a ** ((K.order - 1) // 2) == 1


class QuadElement:
    """x + y*theta (nonsplit) or the pair (x, y) = x e_w + y e_wbar (split)."""

    __slots__ = ("E", "x", "y")

    def __init__(self, E: QuadExtDesc, x: LocalElement, y: LocalElement):
        self.E = E
        self.x = x
        self.y = y

    @staticmethod
    def of(E, x, y=0):
        F = E.base
        cv = lambda t: t if isinstance(t, LocalElement) else LocalElement.from_fraction(F, t)
        return QuadElement(E, cv(x), cv(y))

    def _theta_sq(self):
        return LocalElement.from_coeffs(self.E.base, self.E.theta_sq)

    def __add__(self, z):
        return QuadElement(self.E, self.x + z.x, self.y + z.y)

    def __sub__(self, z):
        return QuadElement(self.E, self.x - z.x, self.y - z.y)

    def __neg__(self):
        return QuadElement(self.E, -self.x, -self.y)

    def __mul__(self, z):
        if isinstance(z, LocalElement):
            z = self.E.embed(z)
        if self.E.kind == "split":
            return QuadElement(self.E, self.x * z.x, self.y * z.y)
        t2 = self._theta_sq()
        return QuadElement(self.E, self.x * z.x + t2 * self.y * z.y, self.x * z.y + self.y * z.x)

    def conj(self):
        if self.E.kind == "split":
            return QuadElement(self.E, self.y, self.x)
        return QuadElement(self.E, self.x, -self.y)

    def norm(self) -> LocalElement:
        if self.E.kind == "split":
            return self.x * self.y
        return self.x * self.x - self._theta_sq() * self.y * self.y

    def trace(self) -> LocalElement:
        if self.E.kind == "split":
            return self.x + self.y
        return self.x + self.x

    def inverse(self):
        if self.E.kind == "split":
            return QuadElement(self.E, self.x.inverse(), self.y.inverse())
        n = self.norm().inverse()
        c = self.conj()
        return QuadElement(self.E, c.x * n, c.y * n)

    def __truediv__(self, z):
        return self * z.inverse()

    def __eq__(self, z):
        return isinstance(z, QuadElement) and self.x == z.x and self.y == z.y

    def __hash__(self):
        return hash((self.E, self.x, self.y))

    def valuation(self) -> int:
        """w(z) with w(varpi_E) = 1 (nonsplit only)."""
        if self.E.kind == "split":
            raise ValueError("split algebra has a pair of valuations")
        # a coordinate that cancelled to O(ell^k) only bounds the valuation from below
        sx, sy = (1, 1) if self.E.kind == "inert" else (2, 2)
        ox, oy = (0, 0) if self.E.kind == "inert" else (0, 1)
        cands = []
        for c, s, o in ((self.x, sx, ox), (self.y, sy, oy)):
            if c.is_approx_zero():
                cands.append((s * c.abs_prec + o, False))
            else:
                cands.append((INF if c.val is INF else s * c.val + o, True))
        exact = [w for w, ok in cands if ok]
        w = min(exact) if exact else INF
        if any(not ok and b <= w for b, ok in cands) or (not exact and w is INF and
                                                          any(not ok for _, ok in cands)):
            raise PrecisionError("valuation not determined at this precision")
        return w

    def unit_residue(self, n: int):
        """(w, (xcoords, ycoords)) with z = varpi_E^w u and u modulo varpi_E^n."""
        E, F = self.E, self.E.base
        w = self.valuation()
        if w is INF:
            raise ZeroDivisionError("zero has no unit part")
        nx, ny = E.level_split(n)
        if E.kind == "inert":
            u = QuadElement(E, self.x * _ell_pow(F, -w), self.y * _ell_pow(F, -w))
        else:
            k, r = divmod(w, 2)
            mD = LocalElement.from_coeffs(F, E.theta_sq)  # theta^2 = -D
            u = QuadElement(E, self.x * mD ** (-k), self.y * mD ** (-k))
            if r:
                # z / theta = y + x/theta^2 * theta
                u = QuadElement(E, u.y, u.x / mD)
        return w, (_coords(u.x, nx), _coords(u.y, ny))

    def __repr__(self):
        sep = ", " if self.E.kind == "split" else " + theta*"
        return f"QuadElement({self.x}{sep}{self.y})"


def _ell_pow(F, k):
    return LocalElement(F, k, (1,) + (0,) * (F.f - 1), _nmax(F))


def _coords(x: LocalElement, n: int):
    if n == 0:
        return ()
    return x.integral_coeffs(n)


def qe_norm_trace_conj(z: QuadElement):
    return z.norm(), z.trace(), z.conj()


def qe_arith(x: QuadElement, y: QuadElement, op: str) -> QuadElement:
    return {"add": x.__add__, "sub": x.__sub__, "mul": x.__mul__,
            "div": x.__truediv__}[op](y)


# ---------------------------------------------------------------------------
# additive characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdditiveCharParams:
    field: LocalFieldDesc
    level: int


def psi_angle(F: LocalFieldDesc, x: LocalElement, level: int = None) -> Fraction:
    """angle with psi(x) = exp(2 pi i angle)."""
    if x.val is INF or x.val >= 0:
        return Fraction(0)
    r = -x.val
    if level is not None and r > level:
        raise LevelError(f"psi evaluated at valuation {x.val} below level -{level}")
    t = F.trace(x.unit_coeffs(r)) % F.ell ** r
    return Fraction(-t, F.ell ** r) % 1


def psi0_angle(F: LocalFieldDesc, x: LocalElement, level: int = None) -> Fraction:
    d = LocalElement.from_unit(F, 0, F.d_F)
    return psi_angle(F, -(x / d), level)


def psi_eval(params: AdditiveCharParams, x: LocalElement, ring=None) -> CycNumber:
    F = params.field
    ang = psi_angle(F, x, params.level)
    ring = ring or standard_ring(F.ell, F.ell ** max(params.level, 1))
    return ring.monomial(ang)


def psi0_eval(params: AdditiveCharParams, x: LocalElement, ring=None) -> CycNumber:
    F = params.field
    ang = psi0_angle(F, x, params.level)
    ring = ring or standard_ring(F.ell, F.ell ** max(params.level, 1))
    return ring.monomial(ang)


# ---------------------------------------------------------------------------
# finite residue rings O/varpi^n, O_E/varpi_E^n and their unit groups
# ---------------------------------------------------------------------------

class ResidueRing:
    """O/ell^n (domain F) or O_E/varpi_E^n (domain nonsplit E), elements as int codes.

    code = sum_i x_i W_i + sum_i y_i W_{f+i} with mixed radices ell^nx, ell^ny.
    """

    def __init__(self, domain, n: int):
        self.domain = domain
        self.n = n
        if isinstance(domain, LocalFieldDesc):
            self.F = domain
            self.nx, self.ny = n, 0
            self.quad = False
        else:
            if domain.kind == "split":
                raise ValueError("split algebras use a pair of F residue rings")
            self.F = domain.base
            self.nx, self.ny = domain.level_split(n)
            self.quad = True
        F = self.F
        self.f = F.f
        self.mx = F.ell ** self.nx
        self.my = F.ell ** self.ny
        self.size = self.mx ** F.f * (self.my ** F.f if self.quad else 1)
        check_bound(self.size, "residue ring")
        self.wx = [self.mx ** i for i in range(F.f)]
        base = self.mx ** F.f
        self.wy = [base * self.my ** i for i in range(F.f)] if self.quad else []
        self.one = 1 % self.size if self.size > 1 else 0
        if self.quad:
            self._D = np.array([c % self.mx for c in domain.D], dtype=np.int64)

    def encode(self, x, y=()):
        c = 0
        for i, v in enumerate(x):
            c += (int(v) % self.mx) * self.wx[i]
        for i, v in enumerate(y):
            c += (int(v) % self.my) * self.wy[i]
        return c

    def decode_arr(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        X = np.stack([(codes // w) % self.mx for w in self.wx]) if self.f else None
        if self.quad:
            Y = np.stack([(codes // w) % self.my for w in self.wy])
        else:
            Y = None
        return X, Y

    def encode_arr(self, X, Y=None):
        X = np.asarray(X, dtype=np.int64) % self.mx
        codes = np.zeros(X.shape[1:], dtype=np.int64)
        for i, w in enumerate(self.wx):
            codes += X[i] * w
        if self.quad and Y is not None:
            Y = np.asarray(Y, dtype=np.int64) % self.my if self.my > 1 else np.zeros_like(X)
            for i, w in enumerate(self.wy):
                codes += Y[i] * w
        return codes

    def _pmul(self, A, B, m):
        """polynomial product of coefficient arrays (f, N) mod lift_poly, mod m."""
        f = self.f
        if f == 1:
            return (A * B) % m
        c = [np.zeros(A.shape[1], dtype=np.int64) for _ in range(2 * f - 1)]
        for i in range(f):
            for j in range(f):
                c[i + j] = (c[i + j] + A[i] * B[j]) % m
        lp = self.F.lift_poly
        for k in range(2 * f - 2, f - 1, -1):
            for i in range(f):
                c[k - f + i] = (c[k - f + i] - c[k] * lp[i]) % m
        return np.stack(c[:f])

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        if self.size == 1:
            return np.zeros_like(a)
        X1, Y1 = self.decode_arr(a)
        X2, Y2 = self.decode_arr(b)
        mx = self.mx
        if not self.quad:
            return self.encode_arr(self._pmul(X1, X2, mx))
        Dc = np.repeat(self._D[:, None], a.size, axis=1)
        yy = self._pmul(Y1 % mx, Y2 % mx, mx)
        X = (self._pmul(X1, X2, mx) - self._pmul(Dc, yy, mx)) % mx
        Y = (self._pmul(X1 % mx, Y2 % mx, mx) + self._pmul(X2 % mx, Y1 % mx, mx)) % mx
        return self.encode_arr(X, Y)

    def pow_arr(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        result = np.full(a.shape, self.one, dtype=np.int64)
        base = a.copy()
        while e:
            if e & 1:
                result = self.mul_arr(result, base)
            base = self.mul_arr(base, base)
            e >>= 1
        return result

    def is_unit_arr(self, codes):
        if self.size == 1:
            return np.ones(np.shape(codes), dtype=bool)
        X, Y = self.decode_arr(codes)
        ell = self.F.ell
        xnz = (X % ell != 0).any(axis=0)
        if self.quad and self.domain.kind == "inert":
            return xnz | (Y % ell != 0).any(axis=0)
        return xnz


class UnitGroup:
    """(O/varpi^n)^x with an invariant-factor basis and a discrete-log table.

    gens[i] has order orders[i], orders[i+1] | orders[i].  The flat index of
    prod g_i^e_i is sum e_i * strides[i] (first generator fastest); table maps
    a residue code to its flat index, -1 for non-units.
    """

    def __init__(self, domain, n: int):
        self.ring = R = ResidueRing(domain, n)
        self.domain = domain
        self.n = n
        if R.size == 1:
            units = np.array([0], dtype=np.int64)
        else:
            allc = np.arange(R.size, dtype=np.int64)
            units = allc[R.is_unit_arr(allc)]
        self.order = len(units)
        gens, orders = _invariant_basis(R, units, self.order)
        self.gens = tuple(int(g) for g in gens)
        self.orders = tuple(int(d) for d in orders)
        strides, s = [], 1
        for d in self.orders:
            strides.append(s)
            s *= d
        self.strides = tuple(strides)
        flat = np.array([R.one], dtype=np.int64)
        for g, d in zip(self.gens, self.orders):
            pw = _powers(R, g, d)
            flat = R.mul_arr(np.tile(flat, d), np.repeat(pw, len(flat)))
        table = np.full(R.size, -1, dtype=np.int64)
        table[flat] = np.arange(len(flat), dtype=np.int64)
        if len(flat) != self.order or (table[units] < 0).any():
            raise ArithmeticError("unit group basis does not span")
        self.flat_codes = flat
        self.table = table

    def exponents_of_flat(self, flat):
        flat = np.asarray(flat, dtype=np.int64)
        return [(flat // s) % d for s, d in zip(self.strides, self.orders)]

    def dlog(self, code: int):
        idx = int(self.table[code])
        if idx < 0:
            raise ValueError("not a unit")
        return tuple(int(e) for e in self.exponents_of_flat(idx))

    def kernel_mask(self, m: int):
        """flat indices of units congruent to 1 modulo varpi^m (m <= n)."""
        R = self.ring
        sub = ResidueRing(self.domain, m) if m > 0 else None
        if sub is None:
            return np.ones(self.order, dtype=bool)
        X, Y = R.decode_arr(self.flat_codes)
        X = X % sub.mx
        Y = Y % sub.my if (Y is not None and sub.quad) else Y
        codes = sub.encode_arr(X, Y if sub.quad else None)
        return codes == sub.one

    def to_json(self):
        return {"order": self.order, "generators": list(self.gens), "orders": list(self.orders)}


def _powers(R, g, d):
    out = np.empty(d, dtype=np.int64)
    cur = R.one
    for t in range(d):
        out[t] = cur
        cur = int(R.mul_arr(np.array([cur]), np.array([g]))[0])
    return out


def _invariant_basis(R, units, order):
    if order == 1:
        return [], []
    per_prime = []
    for r, e in _nt.factor(order):
        m = order // r ** e
        P = np.unique(R.pow_arr(units, m))
        per_prime.append(_primary_basis(R, P, r, r ** e))
    gens, orders = [], []
    depth = max(len(b) for b in per_prime)
    for i in range(depth):
        g, d = R.one, 1
        for b in per_prime:
            if i < len(b):
                g = int(R.mul_arr(np.array([g]), np.array([b[i][0]]))[0])
                d *= b[i][1]
        gens.append(g)
        orders.append(d)
    return gens, orders


def _primary_basis(R, P, r, size):
    """Greedy basis of a finite abelian r-group given by its element codes."""
    Hidx = np.full(R.size, -1, dtype=np.int64)
    H = np.array([R.one], dtype=np.int64)
    Hexp = np.zeros((1, 0), dtype=np.int64)
    Hidx[R.one] = 0
    basis = []
    while len(H) < size:
        cur = P.copy()
        qexp = np.full(len(P), -1, dtype=np.int64)
        j = 0
        while (qexp < 0).any():
            inH = Hidx[cur] >= 0
            qexp[inH & (qexp < 0)] = j
            cur = R.pow_arr(cur, r)
            j += 1
        jmax = int(qexp.max())
        i = int(np.argmax(qexp == jmax))
        x = int(P[i])
        rj = r ** jmax
        h = int(R.pow_arr(np.array([x]), rj)[0])
        ev = Hexp[Hidx[h]]
        corr = R.one
        for (b, d), e in zip(basis, ev):
            if e % rj:
                raise ArithmeticError("greedy basis step failed")
            t = (-(int(e) // rj)) % d
            corr = int(R.mul_arr(np.array([corr]), R.pow_arr(np.array([b]), t))[0])
        x = int(R.mul_arr(np.array([x]), np.array([corr]))[0])
        basis.append((x, rj))
        pw = _powers(R, x, rj)
        newH = R.mul_arr(np.tile(H, rj), np.repeat(pw, len(H)))
        newexp = np.concatenate([np.tile(Hexp, (rj, 1)),
                                 np.repeat(np.arange(rj, dtype=np.int64), len(H))[:, None]], axis=1)
        H, Hexp = newH, newexp
        Hidx[H] = np.arange(len(H), dtype=np.int64)
    return basis


@lru_cache(maxsize=256)
def unit_group_data(domain, n: int) -> UnitGroup:
    """Cached unit group of O/varpi^n (F) or O_E/varpi_E^n (nonsplit E)."""
    return UnitGroup(domain, n)
