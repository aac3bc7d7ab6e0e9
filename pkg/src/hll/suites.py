"""Verification sweeps, runnable from the CLI (``hll verify --suite NAME``).

Each suite returns a SuiteResult whose ``title`` names the identity checked.
Sweeps are deterministic: characters are enumerated in a fixed order and the
random unit parts come from seeded generators.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import _nt
from .assembly import (BetaDatum, PlaceConfig, SemiLocalConfig, c_beta_constant,
                       constant_term_vanishes, dichotomy_holds, embedding_for,
                       fourier_coefficient, msroot_sign, nonvanishing_witness_search, product,
                       solve_eta_dichotomy, spherical_product, w_Cminus)
from .characters import (MulChar, SplitChar, characters_with_conductor, enumerate_unit_characters,
                         is_self_dual, mu_p_is_zero, restrict_to_F, self_dual_characters,
                         unramified_char)
from .cyclotomic import is_nonzero_mod_m, standard_ring
from .errors import EnumerationBoundError, NotPIntegralError, PoleError
from .integrals import (a_tilde_closed, a_tilde_closed_R_prime, epsilon_factor, fourier_eta_sum,
                        gauss_A, gauss_A_tilde_batch, gauss_A_tilde_bruteforce, integral_c_m,
                        local_L_factor, m_threshold, mul_all, root_number, whittaker_at_zero)
from .localfield import LocalElement, LocalFieldDesc, QuadExtDesc
from .settings import settings


@dataclass
class SuiteResult:
    name: str
    title: str
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self):
        return {"suite": self.name, "checks": self.title, "passed": self.passed,
                "elapsed_s": round(self.elapsed, 3), "summary": self.summary,
                "failures": self.failures[:20], "rows": self.rows}


# ---------------------------------------------------------------------------
# sweep data
# ---------------------------------------------------------------------------

def nonsquare(ell: int) -> int:
    return next(a for a in range(2, ell) if _nt.legendre(a, ell) == -1)


def ramified_algebras(ell: int):
    F = LocalFieldDesc(ell)
    return [QuadExtDesc(F, "ramified", (-ell,)), QuadExtDesc(F, "ramified", (-ell * nonsquare(ell),))]


def inert_algebra(ell: int, lam_val: int = 0):
    F = LocalFieldDesc(ell)
    return QuadExtDesc(F, "inert", (nonsquare(ell),), lam_val=lam_val)


def uniformizer_values(max_order: int = 8):
    out = []
    for d in range(1, max_order + 1):
        for n in range(d):
            if math.gcd(n, d) == 1:
                out.append((Fraction(n, d), 0))
    return out


def sweep_characters(E, a: int = 1, max_order: int = 8):
    return characters_with_conductor(E, a, uniformizer_values(max_order), max_order)


def sweep_betas(F: LocalFieldDesc, seed, vals=range(-3, 3), count: int = 3):
    rng = random.Random(f"betas/{F.ell}/{seed}")
    out = []
    m = F.ell ** 4
    for v in vals:
        for _ in range(count):
            u = rng.randrange(1, m)
            while u % F.ell == 0:
                u = rng.randrange(1, m)
            out.append(LocalElement.from_unit(F, v, (u,)))
    return out


def _show(x):
    return str(x)


def _desc_char(chi):
    return repr(chi)


def _desc_beta(b):
    return {"val": b.valuation(), "unit": list(b.unit)}


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_formula_ramified(workers: int = 1, ells=(3, 5, 7)) -> SuiteResult:
    res = SuiteResult("formula-ramified",
                      "closed formula for A~_beta(chi) at ramified places with conductor "
                      "exponent 1 over E, against the brute-force sum")
    n = 0
    for ell in ells:
        for E in ramified_algebras(ell):
            chars = sweep_characters(E)
            for beta in sweep_betas(E.base, f"ram{E.theta_sq}"):
                oracle = gauss_A_tilde_batch(chars, beta, workers=workers)
                for chi, o in zip(chars, oracle):
                    c = a_tilde_closed(chi, beta, "ramified")
                    n += 1
                    ok = c == o
                    if not ok:
                        res.failures.append({"chi": _desc_char(chi), "beta": _desc_beta(beta)})
                    if len(res.rows) < 40:
                        res.rows.append({"ell": ell, "D": list(E.D), "chi": _desc_char(chi),
                                         "beta": _desc_beta(beta), "closed": _show(c),
                                         "oracle": _show(o), "equal": ok})
    res.summary = {"cases": n}
    return res


def inert_case(chi, beta) -> int:
    v = beta.valuation()
    if v == -1:
        return 1
    if v < -1:
        return 2
    rho = restrict_to_F(chi)
    return 3 if not any(rho.unit_images) else 4


def suite_formula_inert(workers: int = 1, ells=(3, 5, 7)) -> SuiteResult:
    res = SuiteResult("formula-inert",
                      "closed formula for A~_beta(chi) at inert places with conductor exponent 1 "
                      "(four cases by v(beta) and chi on O_F^x), against the brute-force sum")
    cases = {1: 0, 2: 0, 3: 0, 4: 0}
    n = 0
    for ell in ells:
        E = inert_algebra(ell)
        chars = sweep_characters(E)
        for beta in sweep_betas(E.base, "inert"):
            oracle = gauss_A_tilde_batch(chars, beta, workers=workers)
            for chi, o in zip(chars, oracle):
                c = a_tilde_closed(chi, beta, "inert")
                n += 1
                cases[inert_case(chi, beta)] += 1
                ok = c == o
                if not ok:
                    res.failures.append({"chi": _desc_char(chi), "beta": _desc_beta(beta)})
                if len(res.rows) < 40:
                    res.rows.append({"ell": ell, "chi": _desc_char(chi), "beta": _desc_beta(beta),
                                     "case": inert_case(chi, beta), "closed": _show(c),
                                     "oracle": _show(o), "equal": ok})
    missing = [k for k, v in cases.items() if v == 0]
    if missing:
        res.failures.append({"uncovered_cases": missing})
    res.summary = {"cases": n, "per_case": cases}
    return res


def r_prime_characters(E, max_order: int = 8):
    return [unramified_char(E, ang) for ang, _ in uniformizer_values(max_order)]


def suite_r_prime(workers: int = 1, ells=(3, 5, 7)) -> SuiteResult:
    res = SuiteResult("r-prime",
                      "A~_beta(chi) for unramified chi at ramified places (closed family against "
                      "brute force) and the Whittaker special value chi^-1(theta)|varpi| at v(beta) = -1")
    n = 0
    poles = 0
    for ell in ells:
        E = ramified_algebras(ell)[0]
        F = E.base
        chars = r_prime_characters(E)
        for beta in sweep_betas(F, "rprime"):
            oracle = gauss_A_tilde_batch(chars, beta, workers=workers)
            for chi, o in zip(chars, oracle):
                n += 1
                c = a_tilde_closed_R_prime(chi, beta)
                ok = c == o
                row = {"ell": ell, "chi_theta": str(chi.unif_angle), "beta": _desc_beta(beta),
                       "closed": _show(c), "oracle": _show(o), "equal": ok}
                ct = chi(E.theta())
                if ct == 1:
                    try:
                        whittaker_at_zero("R_prime", chi, beta)
                        ok = False
                        row["pole_error"] = False
                    except PoleError:
                        poles += 1
                        row["pole_error"] = True
                elif beta.valuation() == -1:
                    W = whittaker_at_zero("R_prime", chi, beta)
                    special = ct.inverse() * Fraction(1, F.q)
                    composed = mul_all([local_L_factor(chi, "R_prime"), c])
                    sv = W == special and composed == special
                    row["special_value"] = sv
                    ok = ok and sv
                if not ok:
                    res.failures.append(row)
                if len(res.rows) < 40:
                    res.rows.append(row)
    res.summary = {"cases": n, "pole_errors_raised": poles}
    return res


def _random_char(rng, E):
    """A random character of E^x with conductor exponent <= 3 and order <= 12."""
    a = rng.choice([0, 1, 1, 2, 2, 3])
    if a == 0:
        if E.kind != "ramified":
            a = 1
        else:
            return unramified_char(E, Fraction(rng.randrange(12), 12))
    imgs_all = list(enumerate_unit_characters(E, a))
    rng.shuffle(imgs_all)
    for imgs in imgs_all:
        chi = MulChar(E, a, imgs, Fraction(rng.randrange(12), 12))
        if chi.conductor == a:
            return chi
    return None


def suite_m_stability(workers: int = 1, count: int = 200) -> SuiteResult:
    res = SuiteResult("m-stability",
                      "the truncated sum A~_beta(chi) is the same at M and M+1 above the threshold")
    rng = random.Random("m-stability")
    done = 0
    tries = 0
    while done < count and tries < 20 * count:
        tries += 1
        ell = rng.choice([3, 5, 7])
        kind = rng.choice(["ramified", "inert"])
        E = ramified_algebras(ell)[rng.randrange(2)] if kind == "ramified" else inert_algebra(ell)
        chi = _random_char(rng, E)
        if chi is None:
            continue
        F = E.base
        beta = LocalElement.from_unit(F, rng.randint(-3, 2), (rng.randrange(1, ell),))
        M = m_threshold(chi, beta)
        t = max(M + 2, -beta.valuation())
        if F.q ** (t + M + 1) > settings.enum_bound:
            continue
        x = gauss_A_tilde_bruteforce(chi, beta, M, workers=workers)
        y = gauss_A_tilde_bruteforce(chi, beta, M + 1, workers=workers)
        done += 1
        ok = x == y
        if not ok:
            res.failures.append({"chi": _desc_char(chi), "beta": _desc_beta(beta), "M": M})
        if len(res.rows) < 40:
            res.rows.append({"ell": ell, "kind": kind, "a": chi.conductor, "beta": _desc_beta(beta),
                             "M": M, "equal": ok})
    if done < count:
        res.failures.append({"too_few_cases": done})
    res.summary = {"cases": done}
    return res


def self_dual_sweep():
    out = []
    for ell in (3, 5, 7, 11, 13):
        for E in ramified_algebras(ell):
            out += [(E, chi) for chi in self_dual_characters(E, 1)]
    for ell in (3, 5):
        for lam_val in (0, 1):
            E = inert_algebra(ell, lam_val)
            for a in (1, 2):
                out += [(E, chi) for chi in self_dual_characters(E, a, max_count=6)]
        Es = QuadExtDesc(LocalFieldDesc(ell), "split")
        for a in (1, 2):
            out += [(Es, chi) for chi in self_dual_characters(Es, a, max_count=6)]
    return out


def suite_msroot(workers: int = 1) -> SuiteResult:
    res = SuiteResult("msroot",
                      "root numbers of self-dual characters: W(chi*) = +-chi*(2 vartheta), "
                      "+1 at split places, (-1)^(a + v(c(R))) at inert places, and the "
                      "epsilon dichotomy W(chi*) tau(eta) = chi*(2 vartheta) solved exactly")
    signs = {"split": set(), "inert": set(), "ramified": set()}
    n = 0
    for E, chi in self_dual_sweep():
        kappa = chi.unitary_twist()
        r = msroot_sign(kappa)
        n += 1
        signs[E.kind].add(r.sign)
        row = {"ell": E.base.ell, "kind": E.kind, "a": kappa.conductor if isinstance(kappa, MulChar)
               else list(kappa.conductor), "v_cR": E.v_cR() if E.kind == "inert" else None,
               "sign": r.sign, "predicted": r.predicted}
        ok = r.consistent
        if E.kind != "split":
            eta = solve_eta_dichotomy(kappa, r.sign)
            row["eta_valuation"] = eta.valuation()
            row["dichotomy"] = dichotomy_holds(kappa, eta)
            ok = ok and row["dichotomy"]
        if not ok:
            res.failures.append(row)
        res.rows.append(row)
    if n < 20:
        res.failures.append({"too_few_characters": n})
    if signs["ramified"] != {1, -1}:
        res.failures.append({"ramified_signs_seen": sorted(signs["ramified"])})
    res.summary = {"characters": n, "signs": {k: sorted(v) for k, v in signs.items()}}
    return res


def unitarity_characters(count: int = 50):
    out = []
    rng = random.Random("unitarity")
    domains = []
    for ell in (3, 5, 7):
        F = LocalFieldDesc(ell)
        domains += [F, inert_algebra(ell), ramified_algebras(ell)[0]]
    for dom in domains:
        for a in (1, 2, 3):
            got = 0
            for imgs in enumerate_unit_characters(dom, a):
                chi = MulChar(dom, a, imgs)
                if chi.conductor != a:
                    continue
                out.append(chi.with_uniformizer(Fraction(rng.randrange(24), 24)))
                got += 1
                if got == 2:
                    break
    rng.shuffle(out)
    return out[:count]


def suite_unitarity(workers: int = 1, count: int = 50) -> SuiteResult:
    res = SuiteResult("unitarity",
                      "|W(mu)| = 1 for unitary ramified mu, and eps(1, mu) = |c| eps(0, mu)")
    chars = unitarity_characters(count)
    for mu in chars:
        W = root_number(mu)
        unit = W * W.conj() == 1
        e1, e0 = epsilon_factor(mu, 1), epsilon_factor(mu, 0)
        D = mu.domain
        F = D if isinstance(D, LocalFieldDesc) else D.base
        fL = F.f * (2 if getattr(D, "kind", None) == "inert" else 1)
        fd = F.f if getattr(D, "kind", None) == "ramified" else 0
        abs_c = Fraction(F.ell) ** (-(fd + fL * mu.conductor))
        ratio = e1 == e0 * abs_c
        row = {"domain": getattr(D, "kind", "F"), "ell": F.ell, "a": mu.conductor,
               "W_times_conj_W_is_1": unit, "eps_ratio": ratio}
        if not (unit and ratio):
            res.failures.append(row)
        res.rows.append(row)
    if len(chars) < count:
        res.failures.append({"too_few_characters": len(chars)})
    res.summary = {"characters": len(chars)}
    return res


def _mu_p_positive_case():
    """ell = 11 inert, chi of order 5 and conductor 1: trivial modulo any prime above 5."""
    E = inert_algebra(11)
    chars = [c for c in characters_with_conductor(E, 1, [(0, 0)], 5) if c.value_order == 5]
    return E, chars[0]


def suite_witness(workers: int = 1, primes=(5, 7, 11)) -> SuiteResult:
    res = SuiteResult("witness",
                      "existence of eta with A_eta(chi) nonzero modulo m when mu_p(chi) = 0 "
                      "(inert self-dual: at v(eta) = -w(C-)), and total vanishing when mu_p > 0")
    found = 0
    for p in primes:
        for ell in (3, 5, 7):
            if ell == p:
                continue
            algebras = [(inert_algebra(ell), 1), (ramified_algebras(ell)[0], 1)]
            for E, a in algebras:
                chars = [c for c in sweep_characters(E, a) if c.value_order % p]
                sd = self_dual_characters(E, a) if E.kind == "inert" else []
                emb = embedding_for(chars + sd, p, ell, psi_depth=2)
                for chi, is_sd in [(c, False) for c in chars] + [(c, True) for c in sd]:
                    if not mu_p_is_zero(chi, emb):
                        continue
                    r = nonvanishing_witness_search(chi, emb, workers=workers)
                    ok = r.status == "found" and r.verified
                    row = {"p": p, "ell": ell, "kind": E.kind, "chi": _desc_char(chi),
                           "self_dual": is_sd, "status": r.status, "valuation": r.valuation}
                    if is_sd:
                        row["at_minus_w"] = r.valuation == -w_Cminus(chi)
                        ok = ok and row["at_minus_w"]
                    found += ok
                    if not ok:
                        res.failures.append(row)
                    if len(res.rows) < 40:
                        res.rows.append(row)
    E, chi = _mu_p_positive_case()
    emb = embedding_for([chi], 5, 11, allow_wild=True, psi_depth=1)
    r = nonvanishing_witness_search(chi, emb)
    rng = random.Random("mu-p-positive")
    zeros = 0
    for _ in range(100):
        u = rng.randrange(1, 11 ** 3)
        while u % 11 == 0:
            u = rng.randrange(1, 11 ** 3)
        beta = LocalElement.from_unit(E.base, rng.randint(-2, 1), (u,))
        zeros += not is_nonzero_mod_m(gauss_A(chi, beta), emb)
    mu_row = {"case": "mu_p > 0", "diagnosis": r.status, "zero_residues": zeros}
    if r.status != "total_vanishing" or zeros != 100:
        res.failures.append(mu_row)
    res.rows.append(mu_row)
    res.summary = {"witnesses": found, "mu_p_positive_zero_residues": zeros}
    return res


def suite_p_integrality(workers: int = 1, primes=(5, 7, 11)) -> SuiteResult:
    res = SuiteResult("p-integrality",
                      "Whittaker values at places dividing D_K/F C- are p-integral")
    checked = 0
    for ell in (3, 5, 7):
        jobs = []
        for E in ramified_algebras(ell):
            jobs.append(("ramified_Cminus", E, sweep_characters(E)))
        E = inert_algebra(ell)
        jobs.append(("inert_Cminus", E, sweep_characters(E)))
        Er = ramified_algebras(ell)[0]
        jobs.append(("R_prime", Er, [c for c in r_prime_characters(Er) if not c(Er.theta()) == 1]))
        for kind, E, chars in jobs:
            emb_ps = [p for p in primes if p != ell]
            for beta in sweep_betas(E.base, f"pint{kind}"):
                vals = gauss_A_tilde_batch(chars, beta, workers=workers)
                for chi, A in zip(chars, vals):
                    W = mul_all([local_L_factor(chi, "R_prime"), A]) if kind == "R_prime" else A
                    for p in emb_ps:
                        if chi.value_order % p == 0:
                            continue
                        try:
                            w = W.descend()
                            _cached_embedding(p, ell, w.ring.M).reduce(w)
                            checked += 1
                        except NotPIntegralError:
                            res.failures.append({"kind": kind, "ell": ell, "p": p,
                                                 "chi": _desc_char(chi), "beta": _desc_beta(beta)})
    res.summary = {"reductions": checked}
    return res


_EMB = {}


def _cached_embedding(p, ell, order):
    """Embeddings keyed by the ring a value actually lives in."""
    key = (p, ell, order)
    if key not in _EMB:
        from .cyclotomic import PrimeEmbedding
        _EMB[key] = PrimeEmbedding(p, ell, _nt.lcm(4 * ell, order))
    return _EMB[key]


# --- assembly -----------------------------------------------------------------

def _elem(F, v, u=1):
    return LocalElement.from_unit(F, v, (u,))


def assembly_configs():
    """Ten hand-built configs: (name, cfg, beta, proof_shaped)."""
    out = []
    F3, F5, F7, F11 = (LocalFieldDesc(e) for e in (3, 5, 7, 11))
    inert3 = inert_algebra(3)
    ram5 = ramified_algebras(5)[0]
    ram3 = ramified_algebras(3)[0]
    inert7 = inert_algebra(7)
    split11 = QuadExtDesc(F11, "split")
    split7 = QuadExtDesc(F7, "split")
    split5 = QuadExtDesc(F5, "split")
    inert5 = inert_algebra(5)
    chi_in3 = sweep_characters(inert3)[3]
    chi_ram5 = sweep_characters(ram5)[2]
    chi_in7 = sweep_characters(inert7)[5]
    chi_rp3 = unramified_char(ram3, Fraction(1, 3))
    chi_ram3 = sweep_characters(ram3)[1]
    sd_in3 = self_dual_characters(inert3, 1)[0]
    sd_ram5 = self_dual_characters(ram5, 1)[0]
    k11 = MulChar(F11, 0, [], Fraction(1, 5))
    unr_split11 = SplitChar(split11, k11, MulChar(F11, 0, [], Fraction(2, 5)))
    unr_split7 = SplitChar(split7, MulChar(F7, 0, [], Fraction(1, 3)), MulChar(F7, 0, [], Fraction(1, 6)))
    ram_pair5 = SplitChar(split5, characters_with_conductor(F5, 1, [(Fraction(1, 4), 0)])[0],
                          characters_with_conductor(F5, 1, [(Fraction(1, 2), 0)])[1])
    unr_inert5 = unramified_char(inert5, Fraction(1, 2))
    l_place = lambda label, E, chi, c=None: PlaceConfig(label, "big_cell_l", E, chi, c)
    sph = lambda label, E, chi, c=None: PlaceConfig(label, "spherical", E, chi, c)

    def mk(name, places, k, betas, shaped, norm=None):
        cfg = SemiLocalConfig(places, k)
        out.append((name, cfg, BetaDatum(betas, norm), shaped))

    # 1: spherical + inert C- + l
    mk("sph+inert+l", [sph("s11", split11, unr_split11), PlaceConfig("i3", "inert_Cminus", inert3, chi_in3),
                       l_place("l7", split7, unr_split7)], 1,
       {"s11": _elem(F11, 1), "i3": _elem(F3, -1, 2), "l7": _elem(F7, 0)}, True)
    # 2: ramified C- + R' + l
    mk("ram+rprime+l", [PlaceConfig("r5", "ramified_Cminus", ram5, chi_ram5),
                        PlaceConfig("rp3", "R_prime", ram3, chi_rp3), l_place("l7", split7, unr_split7)], 2,
       {"r5": _elem(F5, -1, 3), "rp3": _elem(F3, -1), "l7": _elem(F7, 1)}, True)
    # 3: split_plus (ramified pair) + inert C- + l + spherical
    mk("split+inert+l+sph", [PlaceConfig("f5", "split_plus", split5, ram_pair5),
                             PlaceConfig("i7", "inert_Cminus", inert7, chi_in7), l_place("l3", inert3, chi_in3),
                             sph("s11", split11, unr_split11)], 1,
       {"f5": _elem(F5, 0, 2), "i7": _elem(F7, -1, 3), "l3": _elem(F3, 0), "s11": _elem(F11, 2)}, True)
    # 4: zero at the l-place indicator
    mk("l-indicator-zero", [sph("s11", split11, unr_split11), PlaceConfig("i3", "inert_Cminus", inert3, chi_in3),
                            l_place("l7", split7, unr_split7)], 1,
       {"s11": _elem(F11, 0), "i3": _elem(F3, 0, 1), "l7": _elem(F7, -1)}, False)
    # 5: self-dual inert + self-dual ramified + l + spherical inert
    mk("selfdual-inert+ram+l+sph", [PlaceConfig("i3", "inert_Cminus", inert3, sd_in3),
                                    PlaceConfig("r5", "ramified_Cminus", ram5, sd_ram5),
                                    l_place("l11", split11, unr_split11), sph("s5", inert5, unr_inert5)], 1,
       {"i3": _elem(F3, -1), "r5": _elem(F5, -1, 2), "l11": _elem(F11, 0), "s5": _elem(F5, 1)}, True)
    # 6: non proof-shaped v(beta) >= 0 at C- and R'
    mk("c-minus-v0", [PlaceConfig("r3", "ramified_Cminus", ram3, chi_ram3),
                      PlaceConfig("rp3b", "R_prime", ramified_algebras(3)[1],
                                  unramified_char(ramified_algebras(3)[1], Fraction(1, 4))),
                      l_place("l5", split5, ram_pair5)], 1,
       {"r3": _elem(F3, 0, 2), "rp3b": _elem(F3, 1), "l5": _elem(F5, 0)}, False)
    # 7: weight 3 with norm surrogate
    mk("weight3", [sph("s7", split7, unr_split7), PlaceConfig("i3", "inert_Cminus", inert3, chi_in3),
                   l_place("l5", split5, ram_pair5), PlaceConfig("r5", "ramified_Cminus", ram5, chi_ram5)], 3,
       {"s7": _elem(F7, 1), "i3": _elem(F3, -1, 5), "l5": _elem(F5, 0), "r5": _elem(F5, -1)}, True,
       norm=Fraction(7 * 25, 3))
    # 8: five places
    mk("five-places", [sph("s7", split7, unr_split7), sph("s11", split11, unr_split11),
                       PlaceConfig("i3", "inert_Cminus", inert3, chi_in3),
                       PlaceConfig("rp3", "R_prime", ram3, chi_rp3), l_place("l5", split5, ram_pair5)], 1,
       {"s7": _elem(F7, 2), "s11": _elem(F11, 1), "i3": _elem(F3, -1, 4), "rp3": _elem(F3, -1),
        "l5": _elem(F5, 0)}, False)
    # 9: spherical indicator zero
    mk("sph-indicator-zero", [sph("s11", split11, unr_split11), PlaceConfig("r5", "ramified_Cminus", ram5, chi_ram5),
                              l_place("l7", split7, unr_split7)], 1,
       {"s11": _elem(F11, -1), "r5": _elem(F5, 0), "l7": _elem(F7, 0)}, False)
    # 10: split_plus with unramified pair + R' + l + inert C-
    mk("split-unr+rprime+l+inert", [PlaceConfig("f11", "split_plus", split11, unr_split11),
                                    PlaceConfig("rp3", "R_prime", ram3, chi_rp3),
                                    l_place("l5", inert5, unr_inert5),
                                    PlaceConfig("i7", "inert_Cminus", inert7, chi_in7)], 2,
       {"f11": _elem(F11, 1), "rp3": _elem(F3, -1), "l5": _elem(F5, 0), "i7": _elem(F7, -1, 2)}, True)
    return out


def manual_place_value(p: PlaceConfig, beta: LocalElement):
    """Per-place values recomposed from the lower-level operations."""
    F = p.F
    if p.kind in ("ramified_Cminus", "inert_Cminus"):
        return gauss_A_tilde_bruteforce(p.chi, beta)
    if p.kind == "R_prime":
        return mul_all([local_L_factor(p.chi, "R_prime"), gauss_A_tilde_bruteforce(p.chi, beta)])
    return whittaker_at_zero(p.kind, p.chi, beta, p.c_v)


def constant_term_configs():
    F3, F5, F7 = (LocalFieldDesc(e) for e in (3, 5, 7))
    inert3 = inert_algebra(3)
    split7 = QuadExtDesc(F7, "split")
    split5 = QuadExtDesc(F5, "split")
    chi_in3 = sweep_characters(inert3)[3]
    unr7 = SplitChar(split7, MulChar(F7, 0, [], Fraction(1, 3)), MulChar(F7, 0, [], Fraction(1, 6)))
    pair5 = SplitChar(split5, characters_with_conductor(F5, 1, [(0, 0)])[0],
                      characters_with_conductor(F5, 1, [(0, 0)])[1])
    sd_in3 = self_dual_characters(inert3, 1)[0]
    sd_split7 = self_dual_characters(split7, 1)[0]
    weight = SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", inert3, chi_in3),
                              PlaceConfig("l7", "big_cell_l", split7, unr7)], 3)
    splitk = SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", inert3, chi_in3),
                              PlaceConfig("f5", "split_plus", split5, pair5),
                              PlaceConfig("l7", "big_cell_l", split7, unr7)], 1)
    selfdual = SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", inert3, sd_in3),
                                PlaceConfig("l7", "big_cell_l", split7, sd_split7)], 1)
    nothing = SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", inert3, chi_in3),
                               PlaceConfig("l7", "big_cell_l", split7, unr7)], 1)
    return [("weight", weight, "weight"), ("split", splitk, "split-place-kills"),
            ("self-dual", selfdual, "self-dual-L-value"), ("none", nothing, None)]


def suite_assembly(workers: int = 1) -> SuiteResult:
    res = SuiteResult("assembly",
                      "Fourier coefficient = norm factor * N(beta)^(k-1) * product of local "
                      "Whittaker values, its C_beta decomposition, and constant-term vanishing")
    for name, cfg, beta, shaped in assembly_configs():
        fr = fourier_coefficient(cfg, beta)
        vals = [manual_place_value(p, beta.local[p.label]) for p in cfg.places]
        scalar = cfg.global_norm_factor * beta.norm_value(cfg) ** (cfg.k - 1)
        manual = product(vals, cfg.ell_l) * scalar
        ok = fr.value == manual
        row = {"config": name, "places": len(cfg.places), "zero_place": fr.zero_place,
               "value": _show(fr.value), "manual_equal": ok}
        if shaped:
            dec = product([c_beta_constant(cfg, beta), spherical_product(cfg, beta)], cfg.ell_l)
            dec_ok = dec == fr.value
            row["decomposition_equal"] = dec_ok
            ok = ok and dec_ok
        if not ok:
            res.failures.append(row)
        res.rows.append(row)
    for name, cfg, reason in constant_term_configs():
        r = constant_term_vanishes(cfg)
        ok = r.reason == reason and r.vanishes == (reason is not None)
        row = {"constant_term_config": name, "vanishes": r.vanishes, "reason": r.reason,
               "expected": reason}
        if not ok:
            res.failures.append(row)
        res.rows.append(row)
    return res


def fourier_instances():
    F = LocalFieldDesc(3)
    out = []
    algebras = [inert_algebra(3), ramified_algebras(3)[0]]
    for E in algebras:
        for a in (1, 2):
            chi = sweep_characters(E, a, 12)[-1]
            for m, av in [(0, None), (1, 0), (1, -1), (2, 1), (2, 0)]:
                elem = LocalElement.zero(F) if av is None else LocalElement.from_unit(F, av, (2,))
                out.append((E, chi, elem, m))
    return out


def suite_fourier_relation(workers: int = 1) -> SuiteResult:
    res = SuiteResult("fourier-relation",
                      "Fourier relation: integral over eta in varpi^-m O^x of A~_eta(chi) "
                      "psi0(-eta a) equals c_m(a) - c_{m-1}(a)")
    for E, chi, a, m in fourier_instances():
        lhs = fourier_eta_sum(chi, a, m)
        rhs = integral_c_m(chi, a, m) - integral_c_m(chi, a, m - 1)
        ok = lhs == rhs
        row = {"kind": E.kind, "a_chi": chi.conductor, "m": m,
               "a": None if a.is_zero() else _desc_beta(a), "lhs": _show(lhs), "equal": ok}
        if not ok:
            res.failures.append(row)
        res.rows.append(row)
    if len(res.rows) < 20:
        res.failures.append({"too_few_instances": len(res.rows)})
    return res


SUITES = {
    "formula-ramified": suite_formula_ramified,
    "formula-inert": suite_formula_inert,
    "r-prime": suite_r_prime,
    "m-stability": suite_m_stability,
    "msroot": suite_msroot,
    "unitarity": suite_unitarity,
    "witness": suite_witness,
    "p-integrality": suite_p_integrality,
    "assembly": suite_assembly,
    "fourier-relation": suite_fourier_relation,
}


def run_suite(name: str, workers: int = 1) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    t = time.perf_counter()
    res = SUITES[name](workers=workers)
    res.elapsed = time.perf_counter() - t
    return res
