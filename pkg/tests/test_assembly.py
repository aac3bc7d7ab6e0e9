from fractions import Fraction

import pytest

from hll.assembly import (BetaDatum, PlaceConfig, SemiLocalConfig, c_beta_constant, dichotomy_holds,
                          embedding_for, fourier_coefficient, msroot_sign, nonvanishing_witness_search,
                          residual_self_dual_test, solve_eta_dichotomy, spherical_product,
                          to_common, w_Cminus)
from hll.characters import (MulChar, SplitChar, characters_with_conductor, self_dual_characters,
                            tau_char)
from hll.cyclotomic import is_nonzero_mod_m
from hll.errors import HypothesisError, SchemaError
from hll.integrals import a_tilde_dichotomy_value, gauss_A, whittaker_at_zero
from hll.localfield import LocalElement, LocalFieldDesc, QuadExtDesc
from hll.suites import (assembly_configs, constant_term_configs, inert_algebra, ramified_algebras,
                        suite_assembly)

F3, F5, F7 = LocalFieldDesc(3), LocalFieldDesc(5), LocalFieldDesc(7)
INERT3 = inert_algebra(3)
SPLIT7 = QuadExtDesc(F7, "split")
UNR7 = SplitChar(SPLIT7, MulChar(F7, 0, [], Fraction(1, 3)), MulChar(F7, 0, [], Fraction(1, 6)))
QUARTER = [(Fraction(k, 4), 0) for k in range(4)]


def el(F, v, u=1):
    return LocalElement.from_unit(F, v, (u,))


def chi_inert():
    return [c for c in characters_with_conductor(INERT3, 1, QUARTER) if c.value_order == 8][0]


def three_place():
    split5 = QuadExtDesc(F5, "split")
    pair5 = SplitChar(split5, MulChar(F5, 0, [], Fraction(1, 4)), MulChar(F5, 0, [], Fraction(1, 2)))
    places = [PlaceConfig("s5", "spherical", split5, pair5),
              PlaceConfig("i3", "inert_Cminus", INERT3, chi_inert()),
              PlaceConfig("l7", "big_cell_l", SPLIT7, UNR7)]
    return SemiLocalConfig(places, 2)


def test_three_place_hand_composition():
    cfg = three_place()
    beta = BetaDatum({"s5": el(F5, 2, 3), "i3": el(F3, -1, 2), "l7": el(F7, 0, 3)})
    res = fourier_coefficient(cfg, beta)
    vals = [whittaker_at_zero("spherical", cfg.places[0].chi, el(F5, 2, 3)),
            gauss_A(cfg.places[1].chi, el(F3, -1, 2)),
            whittaker_at_zero("big_cell_l", UNR7, el(F7, 0, 3))]
    M = 4 * 7 * 4 * 27 * 25
    expect = vals[0].rebase(7, M) * vals[1].rebase(7, M) * vals[2].lift(M)
    norm = Fraction(5) ** 2 * Fraction(1, 3)
    assert res.value == expect * norm
    assert res.zero_place is None


def test_zero_place_labelled():
    cfg = three_place()
    beta = BetaDatum({"s5": el(F5, 0), "i3": el(F3, -1), "l7": el(F7, -1)})
    res = fourier_coefficient(cfg, beta)
    assert res.value.is_zero() and res.zero_place == "l7"


def test_single_spherical_factor():
    split5 = QuadExtDesc(F5, "split")
    triv = SplitChar(split5, MulChar(F5, 0, []), MulChar(F5, 0, []))
    cfg = SemiLocalConfig([PlaceConfig("s5", "spherical", split5, triv),
                           PlaceConfig("l7", "big_cell_l", SPLIT7, UNR7)], 1)
    b = BetaDatum({"s5": el(F5, 1), "l7": el(F7, 0)})
    # trivial chi: sum_{j<=1} (q |.|^-1 ...)^j = 1 + 5
    assert fourier_coefficient(cfg, b).value == spherical_product(cfg, b) == 6


def test_config_validation():
    with pytest.raises(SchemaError):
        SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", INERT3, chi_inert())])
    with pytest.raises(HypothesisError) as info:
        PlaceConfig("i3", "inert_Cminus", INERT3, chi_inert(), el(F3, 1))
    assert info.value.place == "i3"
    with pytest.raises(HypothesisError):
        PlaceConfig("r3", "ramified_Cminus", INERT3, chi_inert())


def test_c_beta_toy_and_inert():
    split5 = QuadExtDesc(F5, "split")
    triv = SplitChar(split5, MulChar(F5, 0, []), MulChar(F5, 0, []))
    cfg = SemiLocalConfig([PlaceConfig("s5", "spherical", split5, triv),
                           PlaceConfig("l7", "big_cell_l", SPLIT7, UNR7)], 3, Fraction(2))
    b = BetaDatum({"s5": el(F5, 1), "l7": el(F7, 0)})
    assert c_beta_constant(cfg, b) == 2 * 5 ** 2
    cfg = SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", INERT3, chi_inert()),
                           PlaceConfig("l7", "big_cell_l", SPLIT7, UNR7)], 1)
    emb = embedding_for(cfg, 5, 7)
    for u in (1, 2, 4, 5):
        for v in (-1, 0):
            eta = el(F3, v, u)
            b = BetaDatum({"i3": eta, "l7": el(F7, 0)})
            C = c_beta_constant(cfg, b)
            A = gauss_A(chi_inert(), eta)
            C, A = to_common([C, A], 7)
            assert is_nonzero_mod_m(C, emb) == is_nonzero_mod_m(A, emb)


def test_witness_examples():
    chi = chi_inert()
    emb = embedding_for([chi], 5, 3)
    r = nonvanishing_witness_search(chi, emb)
    assert r.status == "found" and r.verified and r.valuation == -1 == -w_Cminus(chi)
    E = ramified_algebras(5)[0]
    for chi in self_dual_characters(E, 1):
        emb = embedding_for([chi], 7, 5)
        r = nonvanishing_witness_search(chi, emb)
        assert r.status == "found"
        if dichotomy_holds(chi.unitary_twist(), r.eta):
            assert r.value == a_tilde_dichotomy_value(chi)


def test_total_vanishing_diagnosis():
    E = inert_algebra(11)
    chi = [c for c in characters_with_conductor(E, 1, [(0, 0)], 5) if c.value_order == 5][0]
    emb = embedding_for([chi], 5, 11, allow_wild=True, psi_depth=1)
    r = nonvanishing_witness_search(chi, emb)
    assert r.status == "total_vanishing" and r.searched == 0


def test_msroot_examples():
    for chi in self_dual_characters(SPLIT7, 1, 4):
        assert msroot_sign(chi.unitary_twist()).sign == 1
    for chi in self_dual_characters(INERT3, 1):
        r = msroot_sign(chi.unitary_twist())
        assert r.sign == -1 == r.predicted
    signs = set()
    for E in ramified_algebras(5):
        signs |= {msroot_sign(c.unitary_twist()).sign for c in self_dual_characters(E, 1)}
    assert signs == {1, -1}


def test_solve_eta():
    for chi in self_dual_characters(INERT3, 1) + self_dual_characters(INERT3, 2):
        k = chi.unitary_twist()
        for sign in (1, -1):
            eta = solve_eta_dichotomy(k, sign)
            assert eta.valuation() % 2 == (0 if sign == 1 else 1)
    E = ramified_algebras(5)[0]
    tau = tau_char(E)
    for chi in self_dual_characters(E, 1):
        k = chi.unitary_twist()
        eta = solve_eta_dichotomy(k)
        assert dichotomy_holds(k, eta)
        assert tau(eta) == msroot_sign(k).sign


def test_constant_term_reasons():
    for name, cfg, reason in constant_term_configs():
        r = constant_term_vanishes_reason(cfg)
        assert r == reason, name


def constant_term_vanishes_reason(cfg):
    from hll.assembly import constant_term_vanishes
    r = constant_term_vanishes(cfg)
    assert r.vanishes == (r.reason is not None)
    return r.reason


def test_residual_self_duality():
    sd = self_dual_characters(INERT3, 1)[0]
    sd7 = self_dual_characters(SPLIT7, 1)[0]
    cfg = SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", INERT3, sd),
                           PlaceConfig("l7", "big_cell_l", SPLIT7, sd7)])
    emb = embedding_for(cfg, 5, 7)
    assert residual_self_dual_test(cfg, emb) == "self_dual"
    # twist at one place by an order-8 character of the units, nontrivial on F^x (order prime to 5)
    twisted = sd * MulChar(INERT3, 1, [Fraction(1, 8)])
    cfg2 = SemiLocalConfig([PlaceConfig("i3", "inert_Cminus", INERT3, twisted),
                            PlaceConfig("l7", "big_cell_l", SPLIT7, sd7)])
    assert residual_self_dual_test(cfg2, embedding_for(cfg2, 5, 7)) == "not_residually_self_dual"


def test_assembly_configs_consistent():
    assert len(assembly_configs()) == 10
    assert all(3 <= len(cfg.places) <= 5 for _, cfg, _, _ in assembly_configs())
