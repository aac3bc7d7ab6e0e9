"""Semi-local Fourier coefficients and the certificates built from them.

A SemiLocalConfig is an explicit finite list of local data; nothing global
is fabricated.  The coefficient is the product of the local Whittaker values
at s = 0 times two user-supplied surrogates: the norm factor |D_F|^-1 and
N(beta)^(k-1).

Values from places with different residue characteristic live in different
cyclotomic rings; they are multiplied after re-expressing all of them in
Q(zeta_M) with M the lcm of the orders met (sqrt(ell) is always folded).

Residual self-duality compares chi_+ with tau |.| modulo m on the generators
of O_F^x and on ell at each place.  The reduction of |x| = q^-v(x) mod p plays
the role of the Teichmuller-normalized cyclotomic factor.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _nt
from .characters import (MulChar, SplitChar, is_self_dual, mu_p_is_zero, restrict_to_F,
                         tau_char)
from .cyclotomic import CycNumber, PrimeEmbedding, get_ring, is_nonzero_mod_m, standard_ring
from .errors import HypothesisError, SchemaError, VerificationError
from .integrals import (PLACE_KINDS, a_tilde_closed, gauss_A, gauss_A_tilde_bruteforce,
                        m_threshold, root_number, whittaker_at_zero)
from .localfield import LocalElement, LocalFieldDesc, QuadExtDesc, unit_group_data

MAX_PLACES = 8


def to_common(values, ell: int):
    """Re-express CycNumbers in one ring Q(zeta_M) tagged with ell."""
    values = list(values)
    M = _nt.lcm(4 * ell, *[v.ring.M for v in values])
    return [v.rebase(ell, M) if v.ring.ell != ell else v.lift(M) for v in values]


def product(values, ell: int) -> CycNumber:
    vals = to_common(values, ell)
    out = vals[0].ring.one()
    for v in vals:
        out = out * v
    return out


# ---------------------------------------------------------------------------
# configuration types
# ---------------------------------------------------------------------------

@dataclass
class PlaceConfig:
    label: str
    kind: str
    E: QuadExtDesc
    chi: object  # MulChar on a nonsplit E^x or SplitChar
    c_v: LocalElement = None
    v_cR: int = None

    def __post_init__(self):
        F = self.E.base
        if self.c_v is None:
            self.c_v = LocalElement.one(F)
        if self.v_cR is None and self.E.kind == "inert":
            self.v_cR = self.E.v_cR()
        self.validate()

    @property
    def F(self) -> LocalFieldDesc:
        return self.E.base

    def validate(self):
        k, E, chi = self.kind, self.E, self.chi
        err = lambda msg, hyp=None: HypothesisError(msg, place=self.label, hypothesis=hyp)
        if k not in PLACE_KINDS:
            raise SchemaError(f"unknown place kind {k!r}", place=self.label)
        if E.kind == "split" and not isinstance(chi, SplitChar):
            raise err("split places carry a pair of characters")
        if E.kind != "split" and not isinstance(chi, MulChar):
            raise err("nonsplit places carry one character of E^x")
        if chi.domain != E:
            raise err("character domain differs from the place algebra")
        if k == "split_plus" and E.kind != "split":
            raise err("split_plus needs a split place", "v | F F^c splits in K")
        if k == "ramified_Cminus" and (E.kind != "ramified" or chi.conductor == 0):
            raise err("ramified_Cminus needs ramified E and ramified chi", "v | C- ramified")
        if k == "inert_Cminus" and (E.kind != "inert" or chi.conductor == 0):
            raise err("inert_Cminus needs inert E and ramified chi", "v | C- inert")
        if k == "R_prime" and (E.kind != "ramified" or chi.conductor != 0):
            raise err("R_prime needs ramified E and unramified chi", "v | D_K/F, v does not divide C-")
        if k == "spherical":
            if E.kind == "ramified":
                raise err("spherical places are unramified in K", "v not dividing D_K/F")
            cond = chi.conductor if isinstance(chi, MulChar) else max(chi.conductor)
            if cond:
                raise err("spherical places need unramified chi", "v in S0")
        if k != "spherical" and not (self.c_v == 1):
            raise err("c_v must be 1 at this place", "c_v = 1 at v | p l C C^c D")

    def to_json(self):
        out = {"label": self.label, "kind": self.kind, "E": self.E.to_json(),
               "chi": self.chi.to_json(), "c_v": self.c_v.to_json()}
        if self.v_cR is not None:
            out["v_cR"] = self.v_cR
        return out


@dataclass
class SemiLocalConfig:
    places: list
    k: int = 1
    global_norm_factor: Fraction = Fraction(1)
    emb: PrimeEmbedding = None
    arch_sign: int = 1

    def __post_init__(self):
        self.global_norm_factor = Fraction(self.global_norm_factor)
        labels = [p.label for p in self.places]
        if len(set(labels)) != len(labels):
            raise SchemaError("place labels must be distinct")
        if sum(p.kind == "big_cell_l" for p in self.places) != 1:
            raise SchemaError("exactly one big_cell_l place is required")
        if len(self.places) > MAX_PLACES:
            raise SchemaError(f"at most {MAX_PLACES} places at desk scale")
        if self.k < 1:
            raise SchemaError("weight k must be a positive integer")

    @property
    def ell_l(self) -> int:
        return self.place_of_kind("big_cell_l").F.ell

    def place_of_kind(self, kind):
        for p in self.places:
            if p.kind == kind:
                return p
        return None

    def place(self, label):
        for p in self.places:
            if p.label == label:
                return p
        raise KeyError(label)


@dataclass
class BetaDatum:
    """beta as one local element per place label; norm = N(beta) surrogate."""
    local: dict
    norm: Fraction = None

    def for_config(self, cfg: SemiLocalConfig):
        missing = [p.label for p in cfg.places if p.label not in self.local]
        if missing:
            raise SchemaError(f"beta has no entry for places {missing}")
        return self

    def norm_value(self, cfg: SemiLocalConfig) -> Fraction:
        if self.norm is not None:
            return Fraction(self.norm)
        out = Fraction(1)
        for p in cfg.places:
            b = self.local[p.label]
            out *= Fraction(p.F.q) ** b.valuation()
        return out


@dataclass
class FourierResult:
    value: CycNumber
    place_trace: list = field(default_factory=list)
    zero_place: str = None

    def to_json(self, emb: PrimeEmbedding = None):
        out = {"value": self.value.to_json(),
               "place_trace": [{"label": l, "kind": k, "value": v.to_json()}
                               for l, k, v in self.place_trace],
               "zero_place": self.zero_place}
        if emb is not None:
            out["residue"] = _residue_json(self.value, emb)
        return out


def _residue_json(x: CycNumber, emb: PrimeEmbedding):
    y = x if x.ring.ell == emb.ell else x.rebase(emb.ell, _nt.lcm(x.ring.M, 4 * emb.ell))
    return [int(c) for c in emb.reduce(y).c]


# ---------------------------------------------------------------------------
# Fourier coefficients and the C_beta constant
# ---------------------------------------------------------------------------

def place_value(p: PlaceConfig, beta: LocalElement, method: str = "bruteforce") -> CycNumber:
    return whittaker_at_zero(p.kind, p.chi, beta, p.c_v, method=method)


def fourier_coefficient(cfg: SemiLocalConfig, beta: BetaDatum, method: str = "bruteforce",
                        short_circuit: bool = False) -> FourierResult:
    """|D_F|^-1 N(beta)^(k-1) prod_v W_beta(phi_v, diag(1, c_v^-1)) at s = 0."""
    beta.for_config(cfg)
    ell = cfg.ell_l
    trace, zero_place = [], None
    for p in cfg.places:
        try:
            v = place_value(p, beta.local[p.label], method)
        except HypothesisError as exc:
            if exc.place is None:
                exc.place = p.label
            raise
        trace.append((p.label, p.kind, v))
        if v.is_zero() and zero_place is None:
            zero_place = p.label
            if short_circuit:
                break
    scalar = cfg.global_norm_factor * beta.norm_value(cfg) ** (cfg.k - 1)
    if zero_place is not None:
        return FourierResult(standard_ring(ell).zero(), trace, zero_place)
    val = product([v for _, _, v in trace], ell) * scalar
    return FourierResult(val, trace, None)


def c_beta_constant(cfg: SemiLocalConfig, beta: BetaDatum, eta: dict = None) -> CycNumber:
    """The constant C_beta: all non-spherical local factors in their simplified forms.

    split_plus: chi_+(beta) phi_wbar(beta) |beta|^-1; big_cell_l: |c|;
    R': chi^-1(theta)|varpi| (the v(beta) = -1 value); C-: A_eta(chi) with eta
    from the assignment (default the beta entry), through the closed form
    when its hypotheses hold."""
    eta = eta or {}
    ell = cfg.ell_l
    vals = []
    for p in cfg.places:
        b = beta.local[p.label]
        F = p.F
        if p.kind == "spherical":
            continue
        if p.kind == "split_plus":
            vals.append(whittaker_at_zero("split_plus", p.chi, b, p.c_v))
        elif p.kind == "big_cell_l":
            vals.append(standard_ring(F.ell).ell_half_power(-2 * F.f * p.c_v.valuation()))
        elif p.kind == "R_prime":
            th = p.chi(p.E.theta())
            vals.append(th.inverse() * Fraction(1, F.q))
        else:
            e = eta.get(p.label, b)
            vals.append(_a_value(p.chi, e))
    scalar = cfg.global_norm_factor * beta.norm_value(cfg) ** (cfg.k - 1)
    if not vals:
        return standard_ring(ell).rational(scalar)
    return product(vals, ell) * scalar


def _a_value(chi: MulChar, eta: LocalElement) -> CycNumber:
    if chi.conductor == 1:
        kind = "ramified" if chi.domain.kind == "ramified" else "inert"
        return a_tilde_closed(chi, eta, kind)
    return gauss_A(chi, eta)


def spherical_product(cfg: SemiLocalConfig, beta: BetaDatum) -> CycNumber:
    vals = [place_value(p, beta.local[p.label]) for p in cfg.places if p.kind == "spherical"]
    ell = cfg.ell_l
    return product(vals, ell) if vals else standard_ring(ell).one()


# ---------------------------------------------------------------------------
# non-vanishing witnesses
# ---------------------------------------------------------------------------

@dataclass
class WitnessResult:
    status: str  # "found", "total_vanishing", "exhausted"
    eta: LocalElement = None
    value: CycNumber = None
    valuation: int = None
    preferred_valuation: int = None
    verified: bool = False
    searched: int = 0
    message: str = ""

    def to_json(self, emb: PrimeEmbedding = None):
        out = {"status": self.status, "searched": self.searched, "message": self.message,
               "preferred_valuation": self.preferred_valuation, "verified": self.verified}
        if self.eta is not None:
            out["eta"] = self.eta.to_json()
            out["valuation"] = self.valuation
            out["at_preferred_valuation"] = self.valuation == self.preferred_valuation
        if self.value is not None:
            out["value"] = self.value.to_json()
            if emb is not None:
                out["residue"] = _residue_json(self.value, emb)
        return out


def w_Cminus(chi: MulChar) -> int:
    """Conductor exponent measured in F-valuation, ceil(a / e)."""
    return -(-chi.conductor // chi.domain.e)


def _valuation_order(centre: int, bound: int):
    out = [centre]
    for d in range(1, 2 * bound + 1):
        for v in (centre + d, centre - d):
            if -bound <= v <= bound:
                out.append(v)
    return [v for v in out if -bound <= v <= bound]


def unit_candidates(F: LocalFieldDesc, level: int):
    """Units of O modulo varpi^level in discrete-log order."""
    ug = unit_group_data(F, level)
    X, _ = ug.ring.decode_arr(ug.flat_codes)
    return [tuple(int(c) for c in X[:, i]) for i in range(X.shape[1])]


def nonvanishing_witness_search(chi: MulChar, emb: PrimeEmbedding, bound: int = 3,
                                workers: int = 1) -> WitnessResult:
    """First eta (valuations from -w(C-) outward, units in discrete-log order)
    with A_eta(chi) nonzero modulo m."""
    E = chi.domain
    if not isinstance(chi, MulChar) or E.kind == "split":
        raise HypothesisError("witness search runs at nonsplit places")
    if not mu_p_is_zero(chi, emb):
        return WitnessResult("total_vanishing", message=(
            "chi is trivial modulo m (mu_p > 0): every A_beta(chi) is 0 mod m, no search"))
    F = E.base
    w = w_Cminus(chi)
    centre = -w if w else -1
    searched = 0
    for v in _valuation_order(centre, bound):
        probe = LocalElement.from_unit(F, v, (1,))
        M = m_threshold(chi, probe)
        level = max(1, M - v)
        etas = [LocalElement.from_unit(F, v, u) for u in unit_candidates(F, level)]

        def value(eta, M=M):
            return gauss_A_tilde_bruteforce(chi, eta, M)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                vals = list(ex.map(value, etas))
        else:
            vals = None
        for i, eta in enumerate(etas):
            searched += 1
            A = vals[i] if vals is not None else value(eta)
            if is_nonzero_mod_m(A, emb):
                again = gauss_A_tilde_bruteforce(chi, eta, M + 1)
                ok = again == A and is_nonzero_mod_m(again, emb)
                if not ok:
                    raise VerificationError("witness failed to re-verify at M+1")
                return WitnessResult("found", eta, A, v, centre, True, searched)
    return WitnessResult("exhausted", preferred_valuation=centre, searched=searched, message=(
        "no witness within the bounds; non-vanishing is guaranteed for mu_p = 0, "
        "so either the bound is too small or there is a bug"))


# ---------------------------------------------------------------------------
# root numbers and the epsilon dichotomy
# ---------------------------------------------------------------------------

@dataclass
class MsrootResult:
    sign: int
    predicted: int  # None for ramified places
    kind: str

    @property
    def consistent(self) -> bool:
        return self.predicted is None or self.predicted == self.sign


def _two_vartheta(E: QuadExtDesc):
    return E.vartheta() * LocalElement.from_int(E.base, 2)


def msroot_sign(kappa, v_cR: int = None) -> MsrootResult:
    """W(kappa) / kappa(2 vartheta) for a unitary kappa with kappa |.|^(1/2) self-dual."""
    E = kappa.domain
    if not kappa.is_unitary:
        raise HypothesisError("msroot_sign expects the unitary twist chi*")
    if not is_self_dual(kappa.abs_twist(1)):
        raise HypothesisError("character is not self-dual", hypothesis="chi|_F = tau |.|_F")
    W = root_number(kappa)
    k2 = kappa(_two_vartheta(E))
    W, k2 = to_common([W, k2], kappa.ell)
    if W == k2:
        sign = 1
    elif W == -k2:
        sign = -1
    else:
        raise VerificationError("W(kappa) / kappa(2 vartheta) is not a sign")
    if E.kind == "split":
        pred = 1
    elif E.kind == "inert":
        v = E.v_cR() if v_cR is None else v_cR
        pred = (-1) ** ((kappa.conductor + v) % 2)
    else:
        pred = None
    return MsrootResult(sign, pred, E.kind)


def solve_eta_dichotomy(kappa, sign: int = None, valuation: int = None) -> LocalElement:
    """eta with W(kappa) tau(eta) = kappa(2 vartheta), i.e. tau(eta) = sign."""
    E = kappa.domain
    if E.kind == "split":
        raise HypothesisError("the dichotomy is posed at nonsplit places")
    F = E.base
    if sign is None:
        sign = msroot_sign(kappa).sign
    tau = tau_char(E)
    target = Fraction(0) if sign == 1 else Fraction(1, 2)
    w = -(-kappa.conductor // E.e)
    v0 = -w if valuation is None else valuation
    vals = [v0, v0 + 1] if valuation is None else [v0]
    for v in vals:
        for u in unit_candidates(F, max(1, tau.level)):
            eta = LocalElement.from_unit(F, v, u)
            if tau.angle_half(eta)[0] == target:
                return eta
    raise HypothesisError("no eta class with the required tau value at this valuation")


def dichotomy_holds(kappa, eta: LocalElement) -> bool:
    """Exact recomputation of W(kappa) tau(eta) = kappa(2 vartheta)."""
    E = kappa.domain
    W = root_number(kappa)
    t = tau_char(E)(eta)
    k2 = kappa(_two_vartheta(E))
    W, t, k2 = to_common([W, t, k2], kappa.ell)
    return W * t == k2


# ---------------------------------------------------------------------------
# constant term and residual self-duality
# ---------------------------------------------------------------------------

@dataclass
class ConstantTermResult:
    vanishes: bool
    reason: str = None
    reasons: list = field(default_factory=list)


def place_is_self_dual(p: PlaceConfig) -> bool:
    return is_self_dual(p.chi)


def constant_term_vanishes(cfg: SemiLocalConfig) -> ConstantTermResult:
    reasons = []
    if cfg.k > 2:
        reasons.append("weight")
    if any(p.kind == "split_plus" for p in cfg.places):
        reasons.append("split-place-kills")
    lp = cfg.place_of_kind("big_cell_l")
    if lp.E.kind == "split" and all(place_is_self_dual(p) for p in cfg.places):
        reasons.append("self-dual-L-value")
    return ConstantTermResult(bool(reasons), reasons[0] if reasons else None, reasons)


def _reduce(x: CycNumber, emb: PrimeEmbedding):
    y = x if x.ring.ell == emb.ell else x.rebase(emb.ell, _nt.lcm(x.ring.M, 4 * emb.ell))
    return emb.reduce(y).c


def residual_self_dual_test(cfg: SemiLocalConfig, emb: PrimeEmbedding = None) -> str:
    """self_dual, residually_self_dual_only or not_residually_self_dual."""
    emb = emb or cfg.emb
    if emb is None:
        raise HypothesisError("residual test needs a prime embedding")
    if all(place_is_self_dual(p) for p in cfg.places):
        return "self_dual"
    for p in cfg.places:
        F = p.F
        rho = restrict_to_F(p.chi)
        target = tau_char(p.E).abs_twist(2)
        n = max(rho.level, target.level, 1)
        rho, target = rho.at_level(n), target.at_level(n)
        Mo = _nt.lcm(rho.value_order, target.value_order)
        ring = standard_ring(F.ell, Mo)
        for a, b in zip(rho.unit_images, target.unit_images):
            if not np.array_equal(_reduce(ring.monomial(a), emb), _reduce(ring.monomial(b), emb)):
                return "not_residually_self_dual"
        if not np.array_equal(_reduce(rho.uniformizer_value(ring), emb),
                              _reduce(target.uniformizer_value(ring), emb)):
            return "not_residually_self_dual"
    return "residually_self_dual_only"


def embedding_for(source, p: int, ell: int, seed: int = 0, allow_wild: bool = False,
                  psi_depth: int = 2) -> PrimeEmbedding:
    """A PrimeEmbedding covering the characters of a config (or a list of
    characters / values) together with zeta_{ell^psi_depth}.

    Brute-force values descend to the smallest ring they need, so a small
    psi_depth keeps the residue field degree manageable."""
    orders = [4 * ell, ell ** psi_depth]
    items = source.places if isinstance(source, SemiLocalConfig) else list(source)
    for it in items:
        if isinstance(it, PlaceConfig):
            orders += [it.chi.value_order, 4 * it.F.ell]
        elif isinstance(it, CycNumber):
            orders.append(it.descend().ring.M)
        else:
            orders.append(it.value_order)
    return PrimeEmbedding(p, ell, _nt.lcm(*orders), seed, allow_wild)
