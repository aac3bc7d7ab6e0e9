"""Local integrals and constants at a nonarchimedean place.

Brute-force integrals are exact finite sums over residue classes.  For a
lattice varpi^s O and a fineness t the integral of g is
q^-t * sum_{Y in O/varpi^(t-s)} g(ell^s Y); the caller picks t so that g is
constant on varpi^t cosets.  All characters of a batch share one histogram of
(w(z), unit code of z, psi exponent) over the representatives z = X + theta,
so a sweep over characters costs one pass over the lattice.

Closed forms use scalar character evaluation and never touch the histogram
code, so agreement between the two routes is a genuine check.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _nt
from .characters import MulChar, SplitChar, f_exponent, restrict_to_F
from .cyclotomic import CycNumber, standard_ring
from .errors import (EnumerationBoundError, HypothesisError, LevelError, PoleError,
                     PrecisionError, VerificationError)
from .localfield import (INF, LocalElement, LocalFieldDesc, QuadElement, QuadExtDesc,
                         ResidueRing, psi0_angle, psi_angle, unit_group_data)
from .settings import check_bound, settings

PLACE_KINDS = ("spherical", "split_plus", "big_cell_l", "ramified_Cminus",
               "inert_Cminus", "R_prime")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def add_all(xs):
    """Sum of CycNumbers from possibly different rings."""
    xs = list(xs)
    if not xs:
        raise ValueError("empty sum")
    M = _nt.lcm(*[x.ring.M for x in xs])
    out = xs[0].lift(M)
    for x in xs[1:]:
        out = out + x.lift(M)
    return out


def mul_all(xs):
    xs = list(xs)
    M = _nt.lcm(*[x.ring.M for x in xs])
    out = xs[0].lift(M)
    for x in xs[1:]:
        out = out * x.lift(M)
    return out


def _q_power(F: LocalFieldDesc, k: int) -> Fraction:
    """|varpi|^k = q^-k."""
    return Fraction(F.ell) ** (-F.f * k)


def _require_nonsplit(chi):
    if not isinstance(chi, MulChar) or not isinstance(chi.domain, QuadExtDesc):
        raise HypothesisError("the place integrals need a character of a nonsplit E^x",
                              hypothesis="E is a field (inert or ramified place)")
    return chi.domain


def _v(x: LocalElement) -> int:
    if x.is_zero():
        raise HypothesisError("beta must be nonzero", hypothesis="beta in F^x")
    return x.valuation()


def m_threshold(chi: MulChar, beta: LocalElement) -> int:
    """M_{C,beta} = max(c, c + v(beta)) with c = ceil(a_E / e); c = 1 for unramified chi.

    For unramified chi the sum over x in varpi^-M O misses the shell
    v(x) = -(v(beta) + 1), so c = 1 is the exact truncation point there."""
    E = chi.domain
    a = chi.conductor
    c = -(-a // E.e) if a else 1
    return max(c, c + _v(beta))


# ---------------------------------------------------------------------------
# vectorized representatives z = X + theta
# ---------------------------------------------------------------------------

def _vec_valuation(Y: np.ndarray, ell: int, cap: int) -> np.ndarray:
    """min ell-adic valuation of the columns of Y (cap for zero columns)."""
    v = np.full(Y.shape[1], cap, dtype=np.int64)
    cur = Y.copy()
    alive = (cur != 0).any(axis=0)
    k = 0
    done = ~alive
    v[~alive] = cap
    while not done.all() and k < cap:
        hit = (~done) & ((cur % ell) != 0).any(axis=0)
        v[hit] = k
        done |= hit
        cur = np.where(done[None, :], cur, cur // ell)
        k += 1
    return v


def _matvec(F, c, Y, m):
    """(c * Y) mod m for coefficient columns Y, c a fixed element of O."""
    if m == 1:
        return np.zeros_like(Y)
    A = F.mult_matrix(tuple(int(x) for x in c), m)
    return (A @ (Y % m)) % m


def _opow(F, c, k, m):
    out = (1,) + (0,) * (F.f - 1)
    for _ in range(k):
        out = F.mul(out, c, m)
    return tuple(x % m for x in out)


def _residue_codes(E: QuadExtDesc, n: int, s0: int, Y: np.ndarray):
    """(w, code) of z = ell^s0 * Y + theta for integer coefficient columns Y."""
    F = E.base
    ell, f = F.ell, F.f
    R = ResidueRing(E, n)
    nx, ny = R.nx, R.ny
    mx, my = R.mx, R.my
    N = Y.shape[1]
    cap = 10 ** 6
    vY = _vec_valuation(Y, ell, cap)
    zero = vY == cap
    vx = np.where(zero, cap, vY + s0)
    w = np.zeros(N, dtype=np.int64)
    Xc = np.zeros((f, N), dtype=np.int64)
    Yc = np.zeros((f, N), dtype=np.int64)
    e0 = np.zeros((f, 1), dtype=np.int64)
    e0[0, 0] = 1
    for val in np.unique(vx):
        idx = np.nonzero(vx == val)[0]
        val = int(val)
        if val == cap:
            if E.kind == "inert":
                w[idx] = 0
                Xc[:, idx] = 0
                Yc[:, idx] = e0 % my
            else:
                w[idx] = 1
                Xc[:, idx] = e0 % mx
                Yc[:, idx] = 0
            continue
        k = val - s0  # valuation of Y on these columns
        Yp = Y[:, idx] // ell ** k
        if E.kind == "inert":
            if val < 0:
                w[idx] = val
                Xc[:, idx] = Yp % mx
                Yc[:, idx] = (e0 * ell ** (-val)) % my
            else:
                w[idx] = 0
                Xc[:, idx] = (Yp * ell ** val) % mx
                Yc[:, idx] = e0 % my
        else:
            d0 = tuple((-c) // ell for c in E.D)  # d0 = -D/ell = theta^2/ell
            if val <= 0:
                w[idx] = 2 * val
                Xc[:, idx] = _matvec(F, _opow(F, d0, -val, mx), Yp, mx)
                yv = tuple(c * ell ** (-val) for c in _opow(F, d0, -val, my)) if my > 1 else (0,) * f
                Yc[:, idx] = np.array(yv, dtype=np.int64)[:, None] % my
            else:
                w[idx] = 1
                Xc[:, idx] = e0 % mx
                if my > 1:
                    inv_d0 = F.inv_unit(d0, ny)
                    Yc[:, idx] = _matvec(F, inv_d0, Yp * (ell ** (val - 1) % my), my)
    codes = R.encode_arr(Xc, Yc)
    return w, codes


def _int_coeffs_of(x: LocalElement, s0: int, K: int):
    """coefficients of x / ell^s0 modulo ell^K (x in ell^s0 O)."""
    F = x.F
    if x.is_zero():
        return (0,) * F.f
    if x.val < s0:
        raise ValueError("element not in the lattice")
    need = x.val - s0
    m = F.ell ** K
    if need >= K:
        return (0,) * F.f
    if x.prec < K - need:
        raise PrecisionError(f"offset known to relative precision {x.prec}, need {K - need}")
    return tuple(c * F.ell ** need % m for c in x.unit)


@dataclass
class Histogram:
    w: np.ndarray
    code: np.ndarray
    j: np.ndarray
    count: np.ndarray
    r: int
    n: int


def lattice_histogram(E: QuadExtDesc, n: int, s: int, t: int, beta=None, offset=None,
                      chunks: int = 1, workers: int = 1) -> Histogram:
    """Histogram of (w, code mod varpi_E^n, psi0 exponent) over z = a + ell^s Y + theta,
    Y in O/varpi^(t-s), where psi0(beta * (a + ell^s Y)) = zeta_{ell^r}^j."""
    F = E.base
    ell, f = F.ell, F.f
    if t <= s:
        raise LevelError("empty lattice quotient")
    size = F.q ** (t - s)
    check_bound(size, "lattice sum")
    if offset is not None and not offset.is_zero():
        s0 = min(s, offset.val)
    else:
        offset = None
        s0 = s
    K = t - s0
    m = ell ** K
    a_coeffs = np.array(_int_coeffs_of(offset, s0, K), dtype=np.int64)[:, None] if offset is not None else None
    # psi0 exponent
    if beta is not None and not beta.is_zero():
        vb = beta.valuation()
        r = max(0, -(vb + s0))
        if r > K:
            raise LevelError(f"psi0 needs fineness {r - K} more digits", hypothesis="t >= -v(beta)")
        if r > 0:
            if beta.prec < r:
                raise PrecisionError("beta known to too little precision")
            dinv = F.inv_unit(F.d_F, r)
            c = F.mul(dinv, beta.unit_coeffs(r), ell ** r)
            lam = F.trace_functional(c, ell ** r)
        else:
            lam = None
    else:
        r, lam = 0, None
    mr = ell ** r

    def part(lo, hi):
        idx = np.arange(lo, hi, dtype=np.int64)
        # digits of idx in base ell^(t-s): coefficient i = (idx // B^i) mod B
        B = ell ** (t - s)
        Yc = np.stack([(idx // B ** i) % B for i in range(f)])
        Ytot = Yc * ell ** (s - s0)
        if a_coeffs is not None:
            Ytot = (Ytot + a_coeffs) % m
        wv, codes = _residue_codes(E, n, s0, Ytot)
        if lam is not None:
            jv = (np.asarray(lam, dtype=np.int64) @ (Ytot % mr)) % mr
        else:
            jv = np.zeros(len(idx), dtype=np.int64)
        return wv, codes, jv

    bounds = np.linspace(0, size, max(1, chunks) + 1).astype(np.int64)
    pieces = [(int(bounds[i]), int(bounds[i + 1])) for i in range(len(bounds) - 1) if bounds[i + 1] > bounds[i]]
    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda p: part(*p), pieces))
    else:
        results = [part(*p) for p in pieces]
    wv = np.concatenate([x[0] for x in results])
    codes = np.concatenate([x[1] for x in results])
    jv = np.concatenate([x[2] for x in results])
    R = ResidueRing(E, n)
    wmin = int(wv.min())
    key = ((wv - wmin) * R.size + codes) * mr + jv
    uk, cnt = np.unique(key, return_counts=True)
    j = uk % mr
    rest = uk // mr
    code = rest % R.size
    w = rest // R.size + wmin
    return Histogram(w, code, j, cnt.astype(np.int64), r, n)


def sum_histogram(chi: MulChar, h: Histogram) -> CycNumber:
    """sum count * chi^-1(z) * psi0 over a histogram."""
    if chi.level != h.n:
        chi = chi.at_level(h.n)
    N = chi.unit_order
    mu = chi.unif_angle.denominator
    ku = chi.unif_angle.numerator
    ell = chi.ell
    mr = ell ** h.r
    ring = standard_ring(ell, N, mu, mr)
    M = ring.M
    lut = chi.angle_table[h.code]
    if (lut < 0).any():
        raise ArithmeticError("histogram contains a non-unit code")
    expo = (-lut * (M // N) - h.w * ku * (M // mu) + h.j * (M // mr)) % M
    total = ring.zero()
    for wv in np.unique(h.w):
        sel = h.w == wv
        vec = np.zeros(M, dtype=np.int64)
        np.add.at(vec, expo[sel], h.count[sel])
        part = ring.from_dense(vec)
        half = -int(wv) * chi.unif_half
        if half:
            part = part * ring.ell_half_power(half)
        total = total + part
    return total


def lattice_integral(chars, E, s, t, beta=None, offset=None, chunks=1, workers=1):
    """|varpi|^t sum over varpi^s O / varpi^t of chi^-1(a + y + theta) psi0(beta (a + y))."""
    F = E.base
    out = []
    cache = {}
    for chi in chars:
        n = chi.level
        if n not in cache:
            cache[n] = lattice_histogram(E, n, s, t, beta, offset, chunks, workers)
        out.append(sum_histogram(chi, cache[n]) * _q_power(F, t))
    return out


# ---------------------------------------------------------------------------
# the integrals A~, A, I, c_m
# ---------------------------------------------------------------------------

def gauss_A_tilde_bruteforce(chi: MulChar, beta: LocalElement, M: int = None,
                             chunks: int = 1, workers: int = 1) -> CycNumber:
    """A~_beta(chi) as the exact sum over x in varpi^-M O / varpi^(M+1)."""
    return gauss_A_tilde_batch([chi], beta, M, chunks, workers)[0]


def gauss_A_tilde_batch(chars, beta: LocalElement, M: int = None, chunks: int = 1, workers: int = 1):
    E = _require_nonsplit(chars[0])
    vb = _v(beta)
    thr = max(m_threshold(c, beta) for c in chars)
    if M is None:
        M = thr
    if M < thr:
        raise HypothesisError(f"truncation M={M} below the threshold {thr}",
                              hypothesis="M >= max(v(C-), v(C-) + v(beta))")
    # psi0(beta x) on varpi^-M O is constant on varpi^t cosets once t >= -v(beta)
    t = max(M + 1, -vb)
    return lattice_integral(chars, E, -M, t, beta, None, chunks, workers)


def gauss_A(chi: MulChar, beta: LocalElement, M: int = None) -> CycNumber:
    """A_beta(chi) = psi0(t beta / 2) A~_beta(chi); t = theta + theta_bar = 0 for odd ell."""
    E = _require_nonsplit(chi)
    if beta.is_zero():
        raise HypothesisError("A_beta is only defined here for beta != 0", hypothesis="beta in F^x")
    trace_theta = E.theta().trace()
    if not trace_theta.is_zero():
        raise ArithmeticError("theta + theta_bar must vanish for odd residue characteristic")
    return gauss_A_tilde_bruteforce(chi, beta, M)


def level_I(chi: MulChar, beta, m: int = 0) -> int:
    """Smallest fineness n (relative to the lattice varpi^m O) guaranteed by the conductor."""
    E = chi.domain
    a = chi.conductor
    if E.kind == "inert":
        n = a - m
    else:
        n = -(-(a + 1) // 2) - m
    n = max(n, 1)
    if beta is not None and not beta.is_zero():
        n = max(n, -beta.valuation() - m)
    return n


def integral_I(chi: MulChar, beta: LocalElement = None, guard: int = 1) -> CycNumber:
    """I(beta) = int_O chi^-1(x + theta) psi0(beta x) dx, stabilized in the level."""
    E = _require_nonsplit(chi)
    n = level_I(chi, beta)
    return _stabilized(lambda k: lattice_integral([chi], E, 0, k, beta)[0], n, guard)


def integral_c_m(chi: MulChar, a: LocalElement, m: int, guard: int = 1) -> CycNumber:
    """c_m(a) = int_O chi^-1(a + varpi^m x + theta) dx."""
    E = _require_nonsplit(chi)
    F = E.base
    n = level_I(chi, None, m)
    scale = _q_power(F, -m)

    def at(k):
        return lattice_integral([chi], E, m, m + k, None, a)[0] * scale

    return _stabilized(at, n, guard)


def _stabilized(fn, n0: int, guard: int):
    prev = fn(n0)
    n = n0
    while True:
        nxt = fn(n + guard)
        if nxt == prev:
            return prev
        n += guard
        prev = nxt
        if n > n0 + 6:
            raise VerificationError("integral did not stabilize in the level")


def fourier_eta_sum(chi: MulChar, a: LocalElement, m: int, M: int = None) -> CycNumber:
    """int over eta in varpi^-m O^x of A~_eta(chi) psi0(-eta a) d eta, as an exact finite sum."""
    E = _require_nonsplit(chi)
    F = E.base
    ell = F.ell
    c = -(-chi.conductor // E.e) if chi.conductor else 1
    if M is None:
        M = max(c, c - m) + 1
    va = 0 if a.is_zero() else a.valuation()
    L = max(1, m + M + max(0, -va), m - va + 1)
    ugF = unit_group_data(F, L)
    X, _ = ugF.ring.decode_arr(ugF.flat_codes)
    terms = []
    for i in range(X.shape[1]):
        u = tuple(int(v) for v in X[:, i])
        eta = LocalElement.from_unit(F, -m, u)
        at = gauss_A_tilde_bruteforce(chi, eta, max(M, m_threshold(chi, eta)))
        ang = psi0_angle(F, -(eta * a)) if not a.is_zero() else Fraction(0)
        terms.append(at * at.ring.monomial(ang) if (at.ring.M % ang.denominator == 0)
                     else at * standard_ring(ell, at.ring.M, ang.denominator).monomial(ang))
    # each class eta (1 + varpi^L O) has volume q^m * q^-L
    return add_all(terms) * _q_power(F, L - m)


# ---------------------------------------------------------------------------
# epsilon factors and root numbers
# ---------------------------------------------------------------------------

def _char_f_data(mu):
    """(domain kind, f_L, f_d) with q_L = ell^f_L and |d_L| = ell^-f_d."""
    D = mu.domain
    if isinstance(D, LocalFieldDesc):
        return "F", D.f, 0
    if D.kind == "inert":
        return "inert", 2 * D.base.f, 0
    return "ramified", D.base.f, D.base.f


def _gauss_sum(mu: MulChar):
    """G = sum_{u in (O_L/varpi^a)^x} mu^-1(u) psi_L(u / c) as a CycNumber."""
    a = mu.conductor
    mu = mu.trimmed()
    D = mu.domain
    F = D if isinstance(D, LocalFieldDesc) else D.base
    ell = F.ell
    ug = mu.ug
    X, Y = ug.ring.decode_arr(ug.flat_codes)
    ang_mu = mu.unit_angle_of_flat(np.arange(ug.order, dtype=np.int64))
    N = mu.unit_order
    kind = _char_f_data(mu)[0]
    dinv_full = F.inv_unit(F.d_F, max(a, 1))
    if kind == "F":
        r, coord = a, X
        c = dinv_full
    elif kind == "inert":
        r, coord = a, Y
        c = dinv_full
    else:
        d0 = tuple((-x) // ell for x in D.D)
        if (a + 1) % 2 == 0:
            k = (a + 1) // 2
            coord = X
        else:
            k = a // 2
            coord = Y
        r = k
        m = ell ** max(r, 1)
        c = F.mul(F.inv_unit(_opow(F, d0, k, m) if k else (1,) + (0,) * (F.f - 1), max(r, 1)),
                  dinv_full, m)
    mr = ell ** r
    if kind == "F":
        # psi(u / (d_F ell^a)) = zeta_{ell^a}^{-Tr(d_F^-1 u)}
        sign = -1
    else:
        # psi(y / (d_F ell^a)) with the same convention
        sign = -1
    if r > 0:
        lam = np.asarray(F.trace_functional(tuple(x % mr for x in c), mr), dtype=np.int64)
        jv = (sign * (lam @ (coord % mr))) % mr
    else:
        jv = np.zeros(ug.order, dtype=np.int64)
    ring = standard_ring(ell, N, mr)
    Mr = ring.M
    expo = (-ang_mu * (Mr // N) + jv * (Mr // mr)) % Mr
    vec = np.bincount(expo, minlength=Mr)
    return ring.from_dense(vec)


def _mu_of_c(mu: MulChar):
    """mu(c), c = d_L varpi_L^a."""
    a = mu.conductor
    D = mu.domain
    if isinstance(D, LocalFieldDesc):
        F = D
        dF = LocalElement.from_unit(F, 0, F.d_F)
        parts = [mu.angle_half(dF), mu.angle_half(LocalElement.from_int(F, F.ell))]
        return (parts[0][0] + a * parts[1][0]) % 1, parts[0][1] + a * parts[1][1]
    F = D.base
    dF = LocalElement.from_unit(F, 0, F.d_F)
    two_dF = dF * 2
    if D.kind == "inert":
        two_theta_dF = D.theta() * two_dF
        x = mu.angle_half(two_theta_dF)
        y = mu.angle_half(LocalElement.from_int(F, F.ell))
        return (x[0] + a * y[0]) % 1, x[1] + a * y[1]
    x = mu.angle_half(D.embed(two_dF))
    y = mu.angle_half(D.theta())
    return (x[0] + (a + 1) * y[0]) % 1, x[1] + (a + 1) * y[1]


def epsilon_factor(mu, s=Fraction(1, 2)) -> CycNumber:
    """epsilon(s, mu, psi_L) for ramified mu and s in {0, 1/2, 1}."""
    s = Fraction(s)
    if s not in (0, Fraction(1, 2), 1):
        raise HypothesisError("s must be 0, 1/2 or 1", hypothesis="s specialized before evaluation")
    if isinstance(mu, SplitChar):
        return mul_all([epsilon_factor(mu.w, s), epsilon_factor(mu.wbar, s)])
    a = mu.conductor
    if a == 0:
        raise HypothesisError("epsilon factor is implemented for ramified characters only",
                              hypothesis="a(mu) >= 1")
    kind, fL, fd = _char_f_data(mu)
    # |c|^(s-1) |d_L|^(1/2) q_L^-a, as a power ell^(h/2)
    abs_c_exp = -(fd + fL * a)  # |c| = ell^abs_c_exp
    h2 = 2 * abs_c_exp * (s - 1) - fd - 2 * fL * a
    if h2.denominator != 1:
        raise ArithmeticError("non-integral half power")
    G = _gauss_sum(mu)
    ang, half = _mu_of_c(mu)
    ring = standard_ring(mu.ell, G.ring.M, ang.denominator)
    return G.lift(ring.M) * ring.monomial(ang, half + int(h2))


def root_number(mu) -> CycNumber:
    """W(mu) = epsilon(1/2, mu, psi_L)."""
    return epsilon_factor(mu, Fraction(1, 2))


def local_L_factor(chi: MulChar, kind: str) -> CycNumber:
    """L(0, chi_v) at a place dividing D_{K/F} C^-."""
    if kind in ("ramified_Cminus", "inert_Cminus"):
        return chi.ring().one()
    if kind != "R_prime":
        raise HypothesisError(f"no local L-factor rule for place kind {kind!r}")
    E = _require_nonsplit(chi)
    if E.kind != "ramified" or chi.conductor != 0:
        raise HypothesisError("R' places need ramified E and unramified chi",
                              hypothesis="chi unramified at a ramified place")
    ct = chi(E.theta())
    if ct == 1:
        raise PoleError("L(s, chi_v) has a pole at s = 0 since chi(theta) = 1",
                        hypothesis="chi(theta) != 1")
    return (ct.ring.one() - ct).inverse()


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _level1_sum(chi: MulChar, beta) -> CycNumber:
    """|varpi| sum_{a in O/varpi} chi^-1(a + theta) psi0(beta a), scalar evaluation."""
    E = chi.domain
    F = E.base
    ell = F.ell
    ring = chi.ring(ell ** max(1, -(beta.valuation()) if beta is not None and not beta.is_zero() else 1))
    total = ring.zero()
    import itertools
    for coeffs in itertools.product(range(ell), repeat=F.f):
        a = LocalElement.from_coeffs(F, coeffs)
        z = QuadElement(E, a, LocalElement.one(F))
        ang, half = chi.angle_half(z)
        if beta is not None and not beta.is_zero() and not a.is_zero():
            pa = psi0_angle(F, beta * a)
        else:
            pa = Fraction(0)
        total = total + ring.monomial(pa - ang, -half)
    return total * _q_power(F, 1)


def _unit_restriction_trivial(chi: MulChar) -> bool:
    rho = restrict_to_F(chi)
    return not any(rho.unit_images)


def _eps_term(chi: MulChar, beta: LocalElement):
    """chi*(-beta d_F^-1) * epsilon(1, chi_+ |.|^-1, psi)."""
    E = chi.domain
    F = E.base
    star = chi.unitary_twist()
    dF = LocalElement.from_unit(F, 0, F.d_F)
    val = star(E.embed(-(beta / dF)), star.ring())
    mu = restrict_to_F(chi).abs_twist(-2)
    eps = epsilon_factor(mu, 1)
    return mul_all([val, eps])


def a_tilde_closed_ramified(chi: MulChar, beta: LocalElement, form: str = "1") -> CycNumber:
    """Closed forms at a ramified place with conductor exponent 1 over E.

    form "1": chi*(theta^-1)|varpi|^(1/2) + chi*(-beta d_F^-1) eps(1, chi_+|.|^-1, psi);
    form "3": (chi*(-2 delta^-1 d_F) + chi*(beta/2) W(chi*)) chi(-d_F^-1) |varpi|^(1/2).
    """
    E = _require_nonsplit(chi)
    if E.kind != "ramified" or chi.conductor != 1:
        raise HypothesisError("closed form needs ramified E and conductor exponent 1 over E",
                              hypothesis="w(C-) = 1 at a ramified place")
    F = E.base
    vb = _v(beta)
    if vb < -1:
        return chi.ring().zero()
    star = chi.unitary_twist()
    half_varpi = standard_ring(F.ell).ell_half_power(-F.f)  # |varpi|^(1/2)
    dF = LocalElement.from_unit(F, 0, F.d_F)
    if form == "1":
        first = mul_all([star(E.theta().inverse()), half_varpi])
        return add_all([first, _eps_term(chi, beta)])
    if form == "3":
        delta = E.theta() * LocalElement.from_int(F, 2)
        arg = delta.inverse() * (dF * (-2))
        W = root_number(star)
        t1 = star(arg)
        t2 = mul_all([star(E.embed(beta / 2)), W])
        return mul_all([add_all([t1, t2]), chi(E.embed(-(dF.inverse()))), half_varpi])
    raise ValueError(f"unknown form {form!r}")


def a_tilde_dichotomy_value(chi: MulChar, literal: bool = False) -> CycNumber:
    """A~_eta for self-dual chi and eta with W(chi*) tau(eta) = chi*(2 vartheta).

    Form (3) then collapses to 2 chi*(vartheta) chi(-d_F^-1) |varpi|^(1/2).
    literal=True returns 2 chi*(vartheta) chi(-2^-1 d_F^-1) |varpi|^(1/2), which
    differs by chi(2) = tau(2) and is kept only to exhibit the discrepancy."""
    E = chi.domain
    F = E.base
    star = chi.unitary_twist()
    dF = LocalElement.from_unit(F, 0, F.d_F)
    half_varpi = standard_ring(F.ell).ell_half_power(-F.f)
    arg = (dF * 2).inverse() if literal else dF.inverse()
    return mul_all([star(E.vartheta()) * 2, chi(E.embed(-arg)), half_varpi])


def a_tilde_closed_inert(chi: MulChar, beta: LocalElement) -> CycNumber:
    """The four cases at an inert place with conductor exponent 1 over E."""
    E = _require_nonsplit(chi)
    if E.kind != "inert" or chi.conductor != 1:
        raise HypothesisError("closed form needs inert E and conductor exponent 1 over E",
                              hypothesis="w(C-) = 1 at an inert place")
    F = E.base
    vb = _v(beta)
    if vb == -1:
        return _level1_sum(chi, beta)
    if vb < -1:
        return chi.ring().zero()
    q_inv = _q_power(F, 1)
    if _unit_restriction_trivial(chi):
        star = chi.unitary_twist()
        ell_el = LocalElement.from_int(F, F.ell)
        c = star(E.embed(ell_el))
        R = c.ring
        total = R.rational(-q_inv)
        for j in range(1, vb + 1):
            total = total + c ** j * (1 - q_inv)
        return total - c ** (vb + 1) * q_inv
    I0 = _level1_sum(chi, None)
    return add_all([I0, _eps_term(chi, beta)])


def a_tilde_closed_R_prime(chi: MulChar, beta: LocalElement, form: str = "expanded") -> CycNumber:
    """A~_beta at a ramified place with chi unramified.

    v(beta) >= 0: chi^-1(theta)|varpi| + (1-|varpi|) sum_{j<=v} alpha^j - |varpi| alpha^(v+1),
    alpha = chi(varpi)|varpi|^-1 ("expanded"); form "factored" gives
    (1-chi(theta))(1+|varpi|chi^-1(theta))(1-alpha^(v+2))/(1-alpha) for comparison.
    v(beta) = -1: (1 - chi(theta)) chi^-1(theta) |varpi|; v(beta) < -1: 0.
    """
    E = _require_nonsplit(chi)
    if E.kind != "ramified" or chi.conductor != 0:
        raise HypothesisError("R' closed form needs ramified E and unramified chi",
                              hypothesis="chi unramified at a ramified place")
    F = E.base
    vb = _v(beta)
    ct = chi(E.theta())
    R = ct.ring
    q_inv = _q_power(F, 1)
    if vb < -1:
        return R.zero()
    if vb == -1:
        return (R.one() - ct) * ct.inverse() * q_inv
    alpha = chi(E.embed(LocalElement.from_int(F, F.ell))).lift(R.M) * Fraction(F.q)
    if form == "expanded":
        total = ct.inverse() * q_inv
        for j in range(vb + 1):
            total = total + alpha ** j * (1 - q_inv)
        return total - alpha ** (vb + 1) * q_inv
    if form == "factored":
        if alpha == 1:
            raise PoleError("geometric factor degenerates at alpha = 1", hypothesis="alpha != 1")
        return (R.one() - ct) * (R.one() + ct.inverse() * q_inv) * (R.one() - alpha ** (vb + 2)) / (R.one() - alpha)
    raise ValueError(f"unknown form {form!r}")


def a_tilde_closed(chi: MulChar, beta: LocalElement, kind: str, form: str = None) -> CycNumber:
    """Dispatcher: kind in {"ramified", "inert", "R_prime"}."""
    if kind in ("ramified", "a", "ramified_Cminus"):
        return a_tilde_closed_ramified(chi, beta, form or "1")
    if kind in ("inert", "b", "inert_Cminus"):
        return a_tilde_closed_inert(chi, beta)
    if kind in ("R_prime", "c"):
        return a_tilde_closed_R_prime(chi, beta, form or "expanded")
    raise HypothesisError(f"unknown closed-form family {kind!r}")


# ---------------------------------------------------------------------------
# Whittaker values at s = 0
# ---------------------------------------------------------------------------

def _indicator_O(x: LocalElement) -> bool:
    return x.is_zero() or x.valuation() >= 0


def whittaker_at_zero(kind: str, chi, beta: LocalElement, c_v: LocalElement = None,
                      method: str = "bruteforce") -> CycNumber:
    """W_beta(phi_{chi,s,v}, diag(1, c_v^-1)) at s = 0 for each place type (|D_F|_v = 1)."""
    if kind not in PLACE_KINDS:
        raise HypothesisError(f"unknown place kind {kind!r}")
    if beta.is_zero():
        raise HypothesisError("beta must be nonzero", hypothesis="beta in F^x")
    E = chi.domain
    F = E.base
    if c_v is None:
        c_v = LocalElement.one(F)
    if kind == "spherical":
        if isinstance(chi, MulChar) and (E.kind == "ramified" or chi.conductor != 0):
            raise HypothesisError("spherical places need unramified chi on split or inert E",
                                  hypothesis="v in S0")
        if isinstance(chi, SplitChar) and (chi.w.conductor or chi.wbar.conductor):
            raise HypothesisError("spherical places need unramified chi", hypothesis="v in S0")
        bc = beta * c_v
        if not _indicator_O(bc):
            return standard_ring(F.ell).zero()
        rho = restrict_to_F(chi)
        chi_plus_c = rho(c_v)
        star_varpi = rho(LocalElement.from_int(F, F.ell)) * Fraction(F.q)
        star_varpi = star_varpi.lift(_nt.lcm(star_varpi.ring.M, chi_plus_c.ring.M))
        total = star_varpi.ring.zero()
        for j in range(bc.valuation() + 1):
            total = total + star_varpi ** j
        return mul_all([chi_plus_c, total])
    if kind == "split_plus":
        if not isinstance(chi, SplitChar):
            raise HypothesisError("split_plus places need a split character pair")
        if not (c_v == 1):
            raise HypothesisError("c_v must be 1 at this place", hypothesis="c_v = 1 at v | pFCC^c D")
        vb = beta.valuation()
        if chi.wbar.conductor > 0:
            if vb != 0:
                return chi.ring().zero()
            return chi.w(beta)
        if vb < 0:
            return chi.ring().zero()
        return mul_all([chi.w(beta), chi.wbar(beta)]) * Fraction(F.q) ** vb
    if kind == "big_cell_l":
        bc = beta * c_v
        if not _indicator_O(bc):
            return standard_ring(F.ell).zero()
        return standard_ring(F.ell).ell_half_power(-2 * F.f * c_v.valuation())
    # places dividing D_{K/F} C^-
    if not (c_v == 1):
        raise HypothesisError("c_v must be 1 at this place", hypothesis="c_v = 1 at v | pFCC^c D")
    _require_nonsplit(chi)
    if kind == "R_prime":
        L = local_L_factor(chi, "R_prime")
        if method == "closed":
            A = a_tilde_closed_R_prime(chi, beta)
        else:
            A = gauss_A_tilde_bruteforce(chi, beta)
        return mul_all([L, A])
    if kind == "ramified_Cminus" and E.kind != "ramified":
        raise HypothesisError("ramified_Cminus needs ramified E")
    if kind == "inert_Cminus" and E.kind != "inert":
        raise HypothesisError("inert_Cminus needs inert E")
    if chi.conductor == 0:
        raise HypothesisError("C- places need ramified chi", hypothesis="v | C-")
    if method == "closed":
        return a_tilde_closed(chi, beta, "ramified" if E.kind == "ramified" else "inert")
    return gauss_A_tilde_bruteforce(chi, beta)
