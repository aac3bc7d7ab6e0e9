"""Multiplicative characters of F^x and E^x with exact cyclotomic values.

A character is stored by the images of the unit-group generators at some
level n (angles t with value exp(2 pi i t)) and by its value on the
uniformizer, a monomial exp(2 pi i angle) * ell^(half/2).  The uniformizer is
ell for F and inert E, theta for ramified E.  Characters of a split algebra
are ordered pairs (chi_w, chi_wbar) of characters of F^x.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _nt
from .cyclotomic import CycNumber, PrimeEmbedding, standard_ring
from .errors import PrecisionError, SchemaError
from .localfield import (INF, LocalElement, LocalFieldDesc, QuadElement, QuadExtDesc,
                         ResidueRing, unit_group_data)

Angle = Fraction


def _frac_mod1(t) -> Fraction:
    return Fraction(t) % 1


def f_exponent(domain) -> int:
    """ell-exponent of the residue field size of the domain."""
    if isinstance(domain, LocalFieldDesc):
        return domain.f
    return domain.f_E


def base_field(domain) -> LocalFieldDesc:
    return domain if isinstance(domain, LocalFieldDesc) else domain.base


def reduce_codes(domain, codes, n_hi: int, n_lo: int):
    """Residue codes at level n_hi mapped to level n_lo <= n_hi."""
    hi = ResidueRing(domain, n_hi)
    lo = ResidueRing(domain, n_lo)
    X, Y = hi.decode_arr(codes)
    return lo.encode_arr(X, Y if lo.quad else None)


class MulChar:
    """A character of F^x or of a nonsplit E^x."""

    def __init__(self, domain, level: int, unit_images, unif_angle=0, unif_half: int = 0):
        if isinstance(domain, QuadExtDesc) and domain.kind == "split":
            raise SchemaError("use SplitChar for split algebras")
        self.domain = domain
        self.level = int(level)
        ug = unit_group_data(domain, self.level)
        imgs = tuple(_frac_mod1(t) for t in unit_images)
        if len(imgs) != len(ug.orders):
            raise SchemaError(f"expected {len(ug.orders)} generator images, got {len(imgs)}")
        for t, d in zip(imgs, ug.orders):
            if (t * d).denominator != 1:
                raise SchemaError(f"image {t} does not respect generator order {d}")
        self.unit_images = imgs
        self.unif_angle = _frac_mod1(unif_angle)
        self.unif_half = int(unif_half)

    # basic data ----------------------------------------------------------
    @property
    def ell(self) -> int:
        return base_field(self.domain).ell

    @property
    def ug(self):
        return unit_group_data(self.domain, self.level)

    @property
    def unit_order(self) -> int:
        return _nt.lcm(1, *[t.denominator for t in self.unit_images])

    @property
    def value_order(self) -> int:
        """lcm of the orders of all root-of-unity parts of values."""
        return _nt.lcm(self.unit_order, self.unif_angle.denominator)

    @property
    def is_unitary(self) -> bool:
        return self.unif_half == 0

    def uniformizer_value(self, ring=None) -> CycNumber:
        ring = ring or standard_ring(self.ell, self.value_order)
        return ring.monomial(self.unif_angle, self.unif_half)

    def ring(self, *extra):
        return standard_ring(self.ell, self.value_order, *extra)

    def key(self):
        t = self.trimmed()
        return (t.domain, t.level, t.unit_images, t.unif_angle, t.unif_half)

    def __eq__(self, other):
        if not isinstance(other, MulChar) or other.domain != self.domain:
            return False
        n = max(self.level, other.level)
        a, b = self.at_level(n), other.at_level(n)
        return (a.unit_images, a.unif_angle, a.unif_half) == (b.unit_images, b.unif_angle, b.unif_half)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        imgs = ", ".join(str(t) for t in self.unit_images)
        return (f"MulChar(level={self.level}, a={self.conductor}, images=[{imgs}], "
                f"unif=({self.unif_angle}, half={self.unif_half}))")

    # unit part -------------------------------------------------------------
    def unit_angle_of_flat(self, flat) -> np.ndarray:
        """numerators mod N (N = unit_order) of the angles of flat unit indices."""
        N = self.unit_order
        ex = self.ug.exponents_of_flat(flat)
        acc = np.zeros(np.shape(flat), dtype=np.int64)
        for e, t in zip(ex, self.unit_images):
            acc = (acc + e * int(t * N)) % N
        return acc

    @cached_property
    def angle_table(self) -> np.ndarray:
        """code -> angle numerator mod unit_order (-1 for non-units)."""
        ug = self.ug
        tab = np.full(ug.ring.size, -1, dtype=np.int64)
        tab[ug.flat_codes] = self.unit_angle_of_flat(np.arange(ug.order, dtype=np.int64))
        return tab

    def unit_angle_of_code(self, code: int) -> Fraction:
        v = int(self.angle_table[code])
        if v < 0:
            raise ValueError("code is not a unit")
        return Fraction(v, self.unit_order)

    # change of level -------------------------------------------------------
    def at_level(self, n: int) -> "MulChar":
        if n == self.level:
            return self
        if n < self.level:
            if self.conductor > n:
                raise ValueError(f"character has conductor {self.conductor} > {n}")
        target = unit_group_data(self.domain, n)
        codes = np.array(target.gens, dtype=np.int64)
        if not target.gens:
            imgs = []
        elif n > self.level:
            red = reduce_codes(self.domain, codes, n, self.level)
            imgs = [self.unit_angle_of_code(int(c)) for c in red]
        else:
            # generators of the lower level lifted to the stored level
            lifted = _lift_codes(self.domain, codes, n, self.level)
            imgs = [self.unit_angle_of_code(int(c)) for c in lifted]
        return MulChar(self.domain, n, imgs, self.unif_angle, self.unif_half)

    @cached_property
    def conductor(self) -> int:
        """a(chi) = least n with chi trivial on 1 + varpi^n O (units of level n)."""
        ug = self.ug
        vals = self.unit_angle_of_flat(np.arange(ug.order, dtype=np.int64))
        if not vals.any():
            return 0
        for m in range(self.level - 1, -1, -1):
            mask = ug.kernel_mask(m)
            if vals[mask].any():
                return m + 1
        return 0  # pragma: no cover

    def trimmed(self) -> "MulChar":
        return self.at_level(self.conductor)

    # evaluation ------------------------------------------------------------
    def angle_half(self, z):
        """(angle, half) with chi(z) = exp(2 pi i angle) ell^(half/2)."""
        w, code = self._w_code(z)
        ang = w * self.unif_angle + self.unit_angle_of_code(code)
        return ang % 1, w * self.unif_half

    def _w_code(self, z):
        n = self.level
        R = self.ug.ring
        if isinstance(self.domain, LocalFieldDesc):
            if not isinstance(z, LocalElement):
                z = LocalElement.from_fraction(self.domain, z)
            if z.is_zero():
                raise ZeroDivisionError("character evaluated at 0")
            if z.prec < n:
                raise PrecisionError(f"unit part needs precision {n}")
            return z.valuation(), R.encode(z.unit_coeffs(n) if n else ())
        if isinstance(z, LocalElement):
            z = self.domain.embed(z)
        elif not isinstance(z, QuadElement):
            z = self.domain.embed(LocalElement.from_fraction(self.domain.base, z))
        w, (xs, ys) = z.unit_residue(n)
        return w, R.encode(xs, ys)

    def __call__(self, z, ring=None) -> CycNumber:
        ang, half = self.angle_half(z)
        ring = ring or self.ring()
        return ring.monomial(ang, half)

    # group operations ------------------------------------------------------
    def _pair(self, other):
        if other.domain != self.domain:
            raise SchemaError("characters on different domains")
        n = max(self.level, other.level)
        return self.at_level(n), other.at_level(n)

    def __mul__(self, other):
        a, b = self._pair(other)
        return MulChar(a.domain, a.level, [s + t for s, t in zip(a.unit_images, b.unit_images)],
                       a.unif_angle + b.unif_angle, a.unif_half + b.unif_half)

    def inverse(self):
        return MulChar(self.domain, self.level, [-t for t in self.unit_images],
                       -self.unif_angle, -self.unif_half)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        return MulChar(self.domain, self.level, [k * t for t in self.unit_images],
                       k * self.unif_angle, k * self.unif_half)

    def abs_twist(self, k: int) -> "MulChar":
        """chi * |.|^(k/2) on the domain."""
        return MulChar(self.domain, self.level, self.unit_images, self.unif_angle,
                       self.unif_half - k * f_exponent(self.domain))

    def unitary_twist(self) -> "MulChar":
        """chi* = chi |.|^(-1/2)."""
        return self.abs_twist(-1)

    def star(self):
        return self.unitary_twist()

    def with_uniformizer(self, angle, half: int = 0):
        return MulChar(self.domain, self.level, self.unit_images, angle, half)

    # serialisation ----------------------------------------------------------
    def to_json(self):
        out = {"level": self.level, "a": self.conductor,
               "unit_images": [{"zeta_pow": t.numerator, "order": t.denominator}
                               for t in self.unit_images],
               "uniformizer_value": {"zeta_pow": self.unif_angle.numerator,
                                     "order": self.unif_angle.denominator,
                                     "ell_half_power": self.unif_half}}
        return out

    @staticmethod
    def from_json(domain, obj) -> "MulChar":
        level = int(obj.get("level", obj.get("a", 0)))
        imgs = [Fraction(int(d["zeta_pow"]), int(d["order"])) for d in obj.get("unit_images", [])]
        u = obj.get("uniformizer_value", {}) or {}
        ang = Fraction(int(u.get("zeta_pow", 0)), int(u.get("order", 1)))
        ch = MulChar(domain, level, imgs, ang, int(u.get("ell_half_power", 0)))
        if "a" in obj and ch.conductor != int(obj["a"]):
            raise SchemaError(f"declared conductor {obj['a']} but the images give {ch.conductor}")
        return ch


def _lift_codes(domain, codes_lo, n_lo: int, n_hi: int):
    """Any lifts of level-n_lo unit codes to level n_hi (coordinates kept)."""
    lo = ResidueRing(domain, n_lo)
    hi = ResidueRing(domain, n_hi)
    X, Y = lo.decode_arr(codes_lo)
    return hi.encode_arr(X, Y if hi.quad else None)


class SplitChar:
    """A character (chi_w, chi_wbar) of E^x = F^x x F^x."""

    def __init__(self, domain: QuadExtDesc, chi_w: MulChar, chi_wbar: MulChar):
        if domain.kind != "split":
            raise SchemaError("SplitChar needs a split algebra")
        if chi_w.domain != domain.base or chi_wbar.domain != domain.base:
            raise SchemaError("components must be characters of F^x")
        self.domain = domain
        self.w = chi_w
        self.wbar = chi_wbar

    @property
    def ell(self):
        return self.domain.base.ell

    @property
    def value_order(self):
        return _nt.lcm(self.w.value_order, self.wbar.value_order)

    @property
    def conductor(self):
        return (self.w.conductor, self.wbar.conductor)

    @property
    def is_unitary(self):
        return self.w.is_unitary and self.wbar.is_unitary

    def ring(self, *extra):
        return standard_ring(self.ell, self.value_order, *extra)

    def __call__(self, z, ring=None):
        ring = ring or self.ring()
        if isinstance(z, LocalElement):
            z = self.domain.embed(z)
        return self.w(z.x, ring) * self.wbar(z.y, ring)

    def angle_half(self, z):
        a1, h1 = self.w.angle_half(z.x)
        a2, h2 = self.wbar.angle_half(z.y)
        return (a1 + a2) % 1, h1 + h2

    def __mul__(self, o):
        return SplitChar(self.domain, self.w * o.w, self.wbar * o.wbar)

    def inverse(self):
        return SplitChar(self.domain, self.w.inverse(), self.wbar.inverse())

    def abs_twist(self, k: int):
        return SplitChar(self.domain, self.w.abs_twist(k), self.wbar.abs_twist(k))

    def unitary_twist(self):
        return self.abs_twist(-1)

    def star(self):
        return self.unitary_twist()

    def __eq__(self, o):
        return isinstance(o, SplitChar) and o.domain == self.domain and o.w == self.w and o.wbar == self.wbar

    def __hash__(self):
        return hash((self.w, self.wbar))

    def __repr__(self):
        return f"SplitChar({self.w!r}, {self.wbar!r})"

    def to_json(self):
        return {"w": self.w.to_json(), "wbar": self.wbar.to_json()}


# ---------------------------------------------------------------------------
# free functions
# ---------------------------------------------------------------------------

def char_eval(chi, z, ring=None) -> CycNumber:
    return chi(z, ring)


def conductor(chi) -> int:
    return chi.conductor


def trivial_char(domain, level: int = 0) -> MulChar:
    return MulChar(domain, level, [0] * len(unit_group_data(domain, level).orders))


def unramified_char(domain, angle=0, half: int = 0) -> MulChar:
    return MulChar(domain, 0, [], angle, half)


def restrict_to_F(chi) -> MulChar:
    """The pullback of chi along F^x -> E^x."""
    E = chi.domain
    F = E.base
    if isinstance(chi, SplitChar):
        return chi.w * chi.wbar
    n = chi.level
    nF = n if E.kind == "inert" else (n + 1) // 2
    ugF = unit_group_data(F, nF)
    RF = ugF.ring
    imgs = []
    for g in ugF.gens:
        X, _ = RF.decode_arr(np.array([g]))
        u = LocalElement.from_unit(F, 0, [int(c) for c in X[:, 0]])
        ang, half = chi.angle_half(E.embed(u))
        imgs.append(ang)
    ang, half = chi.angle_half(E.embed(LocalElement.from_int(F, F.ell)))
    return MulChar(F, nF, imgs, ang, half)


def unitary_twist(chi):
    return chi.unitary_twist()


def tau_char(E: QuadExtDesc) -> MulChar:
    """tau_{E/F}: trivial exactly on Norm(E^x)."""
    F = E.base
    if E.kind == "split":
        return trivial_char(F)
    if E.kind == "inert":
        return unramified_char(F, Fraction(1, 2))
    # ramified: quadratic character on units, tau(Norm theta) = tau(D) = 1
    ug = unit_group_data(F, 1)
    tau_units = MulChar(F, 1, [Fraction(1, 2)])
    _check_norm_group(E, tau_units)
    D = LocalElement.from_coeffs(F, E.D)
    d1 = D / LocalElement.from_int(F, F.ell)
    ang_d1, _ = tau_units.angle_half(d1)
    del ug
    return MulChar(F, 1, [Fraction(1, 2)], -ang_d1, 0)


def _check_norm_group(E, tau_units):
    """Brute-force check: the norms of level-2 units of E are exactly ker(tau) mod ell."""
    F = E.base
    ugE = unit_group_data(E, 2)
    R = ugE.ring
    X, Y = R.decode_arr(ugE.flat_codes)
    ell = F.ell
    norms = set()
    for i in range(X.shape[1]):
        x = tuple(int(c) for c in X[:, i])
        y = tuple(int(c) for c in Y[:, i])
        nx = F.mul(x, x, ell)
        ny = F.mul(F.mul(y, y, ell), tuple(c % ell for c in E.D), ell)
        norms.add(tuple((a + b) % ell for a, b in zip(nx, ny)))
    RF = ResidueRing(F, 1)
    ker = {c for c in range(RF.size) if tau_units.angle_table[c] == 0}
    got = {RF.encode(n) for n in norms}
    if got != ker:
        raise ArithmeticError("norm group does not match the quadratic character")


def is_self_dual(chi) -> bool:
    """chi|_F == tau |.|_F."""
    E = chi.domain
    F = E.base
    rho = restrict_to_F(chi)
    target = tau_char(E).abs_twist(2)  # |.|_F = |.|^(2/2)
    return rho == target


def self_dual_check_star(chi):
    """chi*|_F * |.|_F == tau |.|_F on generators and varpi (as CycNumbers).

    |x|_E = |x|_F^2 on F, so the restriction of chi* = chi|.|_E^(-1/2) loses a
    full |.|_F, not a half power."""
    E = chi.domain
    F = E.base
    rho = restrict_to_F(chi.unitary_twist()).abs_twist(2)
    tau = tau_char(E).abs_twist(2)
    n = max(rho.level, tau.level)
    rho, tau = rho.at_level(n), tau.at_level(n)
    ring = standard_ring(F.ell, rho.value_order, tau.value_order)
    for g, s, t in zip(rho.ug.gens, rho.unit_images, tau.unit_images):
        if ring.monomial(s) != ring.monomial(t):
            return False
    return rho.uniformizer_value(ring) == tau.uniformizer_value(ring)


def mu_p_is_zero(chi, emb: PrimeEmbedding) -> bool:
    """True iff chi is not identically 1 modulo m."""
    if isinstance(chi, SplitChar):
        return mu_p_is_zero(chi.w, emb) or mu_p_is_zero(chi.wbar, emb)
    ring = chi.ring()
    one = emb.reduce(ring.one())
    for t in chi.unit_images:
        if not np.array_equal(emb.reduce(ring.monomial(t)), one):
            return True
    u = emb.reduce(chi.uniformizer_value(ring))
    return not np.array_equal(u, one)


# ---------------------------------------------------------------------------
# enumeration and constructions
# ---------------------------------------------------------------------------

def enumerate_unit_characters(domain, level: int, max_order: int = None):
    """All characters of (O/varpi^level)^x as image tuples."""
    ug = unit_group_data(domain, level)
    ranges = [range(d) for d in ug.orders]
    for ks in itertools.product(*ranges):
        imgs = [Fraction(k, d) for k, d in zip(ks, ug.orders)]
        order = _nt.lcm(1, *[t.denominator for t in imgs])
        if max_order is None or order <= max_order:
            yield imgs


def characters_with_conductor(domain, a: int, unif_values, max_order: int = None):
    """Characters of conductor exactly a with the given uniformizer values."""
    out = []
    for imgs in enumerate_unit_characters(domain, a, max_order):
        base = MulChar(domain, a, imgs)
        if base.conductor != a:
            continue
        for ang, half in unif_values:
            ch = base.with_uniformizer(ang, half)
            if max_order is None or ch.value_order <= max_order:
                out.append(ch)
    return out


def self_dual_characters(E: QuadExtDesc, a: int, max_count: int = None):
    """Self-dual chi = kappa |.|_E^(1/2) with kappa unitary of conductor a."""
    if E.kind == "split":
        return _split_self_dual(E, a, max_count)
    F = E.base
    tau = tau_char(E)
    out = []
    for imgs in enumerate_unit_characters(E, a):
        kappa0 = MulChar(E, a, imgs)
        if kappa0.conductor != a:
            continue
        rho = restrict_to_F(kappa0)
        n = max(rho.level, tau.level)
        if rho.at_level(n).unit_images != tau.at_level(n).unit_images:
            continue
        for ang in _self_dual_uniformizer_angles(E, kappa0, tau):
            kappa = kappa0.with_uniformizer(ang, 0)
            chi = kappa.abs_twist(1)
            if not is_self_dual(chi):
                raise ArithmeticError("constructed character is not self-dual")
            out.append(chi)
            if max_count and len(out) >= max_count:
                return out
    del F
    return out


def _self_dual_uniformizer_angles(E, kappa0, tau):
    F = E.base
    if E.kind == "inert":
        # kappa(ell) = tau(ell) = -1
        return [Fraction(1, 2)]
    # kappa(ell) = kappa(theta)^2 kappa(ell / theta^2) must equal tau(ell)
    ell_el = LocalElement.from_int(F, F.ell)
    u = ell_el / LocalElement.from_coeffs(F, E.theta_sq)
    ang_u, _ = kappa0.angle_half(E.embed(u))
    ang_t, _ = tau.angle_half(ell_el)
    two_x = (ang_t - ang_u) % 1
    return [two_x / 2, two_x / 2 + Fraction(1, 2)]


def _split_self_dual(E, a, max_count):
    F = E.base
    out = []
    for imgs in enumerate_unit_characters(F, a):
        k = MulChar(F, a, imgs)
        if k.conductor != a:
            continue
        for ang in (Fraction(0), Fraction(1, 4), Fraction(1, 3)):
            kw = k.with_uniformizer(ang, 0)
            kappa = SplitChar(E, kw, kw.inverse())
            out.append(kappa.abs_twist(1))
            if max_count and len(out) >= max_count:
                return out
    return out
