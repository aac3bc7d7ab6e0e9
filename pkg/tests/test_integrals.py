from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hll.assembly import solve_eta_dichotomy
from hll.characters import (MulChar, characters_with_conductor, restrict_to_F,
                            self_dual_characters, tau_char, unramified_char)
from hll.cyclotomic import standard_ring
from hll.errors import HypothesisError, PoleError
from hll.integrals import (a_tilde_closed, a_tilde_closed_R_prime, a_tilde_dichotomy_value,
                           epsilon_factor, gauss_A, gauss_A_tilde_batch, gauss_A_tilde_bruteforce,
                           integral_c_m, integral_I, lattice_integral, local_L_factor, m_threshold, mul_all,
                           root_number, whittaker_at_zero)
from hll.localfield import (AdditiveCharParams, LocalElement, LocalFieldDesc, QuadExtDesc,
                            psi0_eval)

F3, F5 = LocalFieldDesc(3), LocalFieldDesc(5)
INERT3 = QuadExtDesc(F3, "inert", (-1,))
RAM3 = QuadExtDesc(F3, "ramified", (-3,))
RAM5 = QuadExtDesc(F5, "ramified", (-5,))
QUARTER = [(Fraction(k, 4), 0) for k in range(4)]


def el(F, v, u=1):
    return LocalElement.from_unit(F, v, (u,))


def trivial_on_OF(chi):
    return not any(restrict_to_F(chi).unit_images)


def order8_inert():
    return [c for c in characters_with_conductor(INERT3, 1, QUARTER) if c.value_order == 8]


def test_deep_beta_vanishes():
    chi = order8_inert()[0]
    beta = el(F3, -4)
    assert beta.valuation() < -1 - m_threshold(chi, beta)
    assert gauss_A_tilde_bruteforce(chi, beta).is_zero()


def test_inert_case3_value():
    chi = next(c for c in characters_with_conductor(INERT3, 1, QUARTER) if trivial_on_OF(c))
    star = chi.unitary_twist()(INERT3.embed(el(F3, 1)))
    pw = Fraction(1, 3)
    assert gauss_A_tilde_bruteforce(chi, el(F3, 0)) == -pw - star * pw


def test_order8_inert_closed_cross_check():
    for chi in order8_inert():
        beta = LocalElement.from_fraction(F3, Fraction(1, 3))
        assert gauss_A_tilde_bruteforce(chi, beta) == a_tilde_closed(chi, beta, "inert")


def test_gauss_A_matches_A_tilde():
    for chi in order8_inert()[:2] + characters_with_conductor(RAM3, 1, QUARTER)[:2]:
        for v in (-2, -1, 0):
            beta = el(F3, v, 2)
            At = gauss_A_tilde_bruteforce(chi, beta)
            # A = psi0(-t beta / 2) A~ with t = theta + theta-bar = 0
            pre = psi0_eval(AdditiveCharParams(F3, 1), LocalElement.zero(F3))
            assert gauss_A(chi, beta) == At == mul_all([pre, At])


def test_gauss_A_rejects_zero():
    with pytest.raises(HypothesisError):
        gauss_A(order8_inert()[0], LocalElement.zero(F3))


def test_below_threshold_rejected():
    chi = order8_inert()[0]
    with pytest.raises(HypothesisError):
        gauss_A_tilde_bruteforce(chi, el(F3, 0), M=0)


def test_integral_I_examples():
    chi = order8_inert()[0]
    assert integral_I(chi, el(F3, -2)).is_zero()
    cr = characters_with_conductor(RAM3, 1, QUARTER)[1]
    expect = cr.unitary_twist()(RAM3.theta()).inverse() * standard_ring(3).ell_half_power(-1)
    assert integral_I(cr, LocalElement.zero(F3)) == expect
    c3 = next(c for c in characters_with_conductor(INERT3, 1, QUARTER) if trivial_on_OF(c))
    assert integral_I(c3, LocalElement.zero(F3)) == Fraction(-1, 3)


def test_c_m_examples():
    chi = order8_inert()[0]
    a = el(F3, 0, 2)
    assert integral_c_m(chi, a, 3) == chi(INERT3.embed(a) + INERT3.theta()).inverse()
    assert integral_c_m(chi, el(F3, 0, 1), 1) == integral_c_m(chi, el(F3, 0, 4), 1)
    zero = LocalElement.zero(F3)
    assert integral_c_m(chi, zero, 0) == integral_I(chi, zero)


def test_closed_examples():
    chi = order8_inert()[0]
    assert a_tilde_closed(chi, el(F3, -3), "inert").is_zero()
    chi_r = unramified_char(RAM5, Fraction(1, 3))
    z = chi_r(RAM5.theta())
    expect = (1 - z) * z.inverse() * Fraction(1, 5)
    assert a_tilde_closed(chi_r, el(F5, -1), "R_prime") == expect
    assert gauss_A_tilde_bruteforce(chi_r, el(F5, -1)) == expect


def test_dichotomy_specialization_ramified():
    """At eta with W(chi*) tau(eta) = chi*(2 vartheta) the closed form collapses."""
    assert tau_char(RAM5)(LocalElement.from_int(F5, 2)) == -1
    seen = 0
    for chi in self_dual_characters(RAM5, 1):
        kappa = chi.unitary_twist()
        eta = solve_eta_dichotomy(kappa)
        A = gauss_A_tilde_bruteforce(chi, eta)
        assert A == a_tilde_closed(chi, eta, "ramified", form="3")
        assert A == a_tilde_dichotomy_value(chi)
        # the variant carrying chi(-2^-1 d_F^-1) is off by tau(2) = -1 here
        assert A == -a_tilde_dichotomy_value(chi, literal=True)
        seen += 1
    assert seen


def test_R_prime_factored_form_mismatch():
    chi = unramified_char(RAM5, Fraction(1, 3))
    for v in (0, 1):
        beta = el(F5, v, 2)
        bf = gauss_A_tilde_bruteforce(chi, beta)
        assert a_tilde_closed_R_prime(chi, beta) == bf
        assert a_tilde_closed_R_prime(chi, beta, form="factored") != bf


def test_local_L_examples():
    cr = characters_with_conductor(RAM3, 1, QUARTER)[0]
    assert local_L_factor(cr, "ramified_Cminus") == 1
    assert local_L_factor(unramified_char(RAM5, Fraction(1, 2)), "R_prime") == Fraction(1, 2)
    with pytest.raises(PoleError):
        local_L_factor(unramified_char(RAM5, 0), "R_prime")


def test_whittaker_examples():
    split7 = QuadExtDesc(LocalFieldDesc(7), "split")
    from hll.characters import SplitChar
    F7 = split7.base
    pair = SplitChar(split7, MulChar(F7, 0, [], 0), MulChar(F7, 0, [], 0))
    assert whittaker_at_zero("spherical", pair, el(F7, -1)).is_zero()
    assert whittaker_at_zero("spherical", pair, el(F7, 0, 3)) == 1
    c = el(F7, 2, 3)
    assert whittaker_at_zero("big_cell_l", pair, el(F7, -2, 5), c) == Fraction(1, 49)


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_epsilon_oracle_on_F(ell):
    F = LocalFieldDesc(ell)
    for imgs in ([Fraction(1, 2)], [Fraction(1, ell - 1)]):
        for ua in (0, Fraction(1, 3)):
            mu = MulChar(F, 1, imgs, ua)
            R = standard_ring(ell, 12, ell, mu.value_order)
            s = R.zero()
            for u in range(1, ell):
                s = s + mu.inverse()(LocalElement.from_int(F, u), R) * R.root_of_unity(-u, ell)
            oracle = mu(LocalElement.from_int(F, ell), R) * s / R.sqrt_ell()
            assert root_number(mu) == oracle == epsilon_factor(mu, Fraction(1, 2))


def test_legendre_root_numbers():
    expect = {3: -1, 5: 1, 7: -1, 11: -1}  # in units of i for ell = 3 mod 4
    for ell, sgn in expect.items():
        F = LocalFieldDesc(ell)
        W = root_number(MulChar(F, 1, [Fraction(1, 2)]))
        R = W.ring
        ref = R.root_of_unity(1, 4) * sgn if ell % 4 == 3 else R.rational(sgn)
        assert W == ref


chars_eps = (characters_with_conductor(F5, 2, [(Fraction(1, 3), 0)], 20)[:4]
             + characters_with_conductor(INERT3, 1, QUARTER)[:4]
             + characters_with_conductor(RAM5, 1, QUARTER)[:4])


@given(st.sampled_from(chars_eps))
def test_epsilon_s_shift(mu):
    e1, e0 = epsilon_factor(mu, 1), epsilon_factor(mu, 0)
    W = root_number(mu)
    assert W * W.conj() == 1
    assert e0 != 0 and e1 != 0
    ratio = e1 / e0
    assert ratio.is_rational() and 0 < ratio.rational_value() < 1


inert_chars = characters_with_conductor(INERT3, 1, QUARTER)
ram_chars = characters_with_conductor(RAM3, 1, QUARTER)


@given(st.sampled_from(inert_chars + ram_chars), st.integers(-3, 1), st.integers(1, 80))
def test_closed_equals_bruteforce(chi, v, u):
    if u % 3 == 0:
        return
    beta = el(F3, v, u)
    kind = "inert" if chi.domain.kind == "inert" else "ramified"
    assert a_tilde_closed(chi, beta, kind) == gauss_A_tilde_bruteforce(chi, beta)


@given(st.sampled_from(inert_chars + ram_chars), st.integers(-3, 1), st.integers(1, 80))
def test_m_stability(chi, v, u):
    if u % 3 == 0:
        return
    beta = el(F3, v, u)
    M = m_threshold(chi, beta)
    assert gauss_A_tilde_bruteforce(chi, beta, M) == gauss_A_tilde_bruteforce(chi, beta, M + 1)


@given(st.integers(-2, 1), st.integers(1, 8))
def test_chunking_and_workers_deterministic(v, u):
    if u % 3 == 0:
        return
    beta = el(F3, v, u)
    chars = inert_chars[:6]
    base = gauss_A_tilde_batch(chars, beta)
    assert gauss_A_tilde_batch(chars, beta, chunks=5, workers=3) == base
    assert [gauss_A_tilde_bruteforce(c, beta) for c in chars] == base


def test_negative_control():
    """The sign of beta matters: the oracle separates beta from -beta."""
    differs = 0
    for chi in order8_inert():
        b = el(F3, -1, 1)
        differs += gauss_A_tilde_bruteforce(chi, b) != gauss_A_tilde_bruteforce(chi, -b)
    assert differs
