from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hll.characters import (MulChar, SplitChar, char_eval, characters_with_conductor, conductor,
                            is_self_dual, mu_p_is_zero, restrict_to_F, self_dual_characters,
                            tau_char, trivial_char, unitary_twist, unramified_char)
from hll.cyclotomic import PrimeEmbedding, standard_ring
from hll.localfield import LocalElement, LocalFieldDesc, QuadElement, QuadExtDesc

F3, F5 = LocalFieldDesc(3), LocalFieldDesc(5)
INERT3 = QuadExtDesc(F3, "inert", (-1,))
RAM5 = QuadExtDesc(F5, "ramified", (-5,))
SPLIT5 = QuadExtDesc(F5, "split")


def el(F, v, u=1):
    return LocalElement.from_unit(F, v, (u,))


def test_eval_examples():
    assert char_eval(trivial_char(F5), el(F5, 3, 2)) == 1
    chi = MulChar(F5, 1, [Fraction(1, 4)], Fraction(1, 3))
    u = chi(el(F5, 1))
    assert chi(el(F5, 2)) == u * u
    leg = MulChar(F5, 1, [Fraction(1, 2)])
    for a in range(1, 5):
        assert leg(LocalElement.from_int(F5, a)) == (1 if pow(a, 2, 5) == 1 else -1)


def test_eval_zero_rejected():
    with pytest.raises(Exception):
        trivial_char(F5)(LocalElement.zero(F5))


def test_conductor_examples():
    assert conductor(trivial_char(F3)) == 0
    assert conductor(unramified_char(F3, Fraction(1, 5))) == 0
    # (Z/9)^x is cyclic of order 6, 1 + 3Z its order-3 subgroup
    assert MulChar(F3, 2, [Fraction(1, 3)]).conductor == 2
    assert MulChar(F3, 2, [Fraction(1, 6)]).conductor == 2
    assert MulChar(F3, 2, [Fraction(1, 2)]).conductor == 1


def test_restriction_examples():
    mu = MulChar(F5, 1, [Fraction(1, 4)], Fraction(1, 3))
    r = restrict_to_F(SplitChar(SPLIT5, mu, mu.inverse()))
    assert not any(r.unit_images) and r.unif_angle == 0
    c = unramified_char(INERT3, Fraction(2, 7))
    assert restrict_to_F(c).unif_angle == Fraction(2, 7)
    for chi in characters_with_conductor(RAM5, 1, [(Fraction(1, 4), 0)], 8):
        rho = restrict_to_F(chi)
        for a in range(1, 25):
            if a % 5:
                x = LocalElement.from_int(F5, a)
                assert rho(x) == chi(RAM5.embed(x))
        assert rho(el(F5, 1)) == chi(RAM5.embed(el(F5, 1)))


def test_unitary_twist_examples():
    ell = INERT3.embed(el(F3, 1))
    assert unitary_twist(unramified_char(INERT3))(ell) == 3
    th = unitary_twist(unramified_char(RAM5))(RAM5.theta())
    assert th == standard_ring(5).sqrt_ell()
    chi = characters_with_conductor(RAM5, 1, [(Fraction(1, 2), 0)])[0]
    assert chi.abs_twist(1).unitary_twist() == chi


def test_tau_char_examples():
    assert tau_char(SPLIT5) == trivial_char(F5)
    t = tau_char(INERT3)
    for u in (1, 2, 4, 5):
        assert t(el(F3, 2, u)) == 1 and t(el(F3, 1, u)) == -1
    t = tau_char(RAM5)
    norms = {(x * x + 5 * y * y) % 5 for x in range(5) for y in range(5)} - {0}
    for a in range(1, 5):
        assert t(LocalElement.from_int(F5, a)) == (1 if a in norms else -1)
    assert t(LocalElement.from_int(F5, 5)) == 1  # Norm(theta) = 5


def test_self_dual_examples():
    mu = MulChar(F5, 1, [Fraction(1, 4)], Fraction(1, 3))
    assert is_self_dual(SplitChar(SPLIT5, mu, mu.inverse().abs_twist(2)))
    assert not is_self_dual(trivial_char(INERT3))
    sds = self_dual_characters(RAM5, 1)
    assert sds
    norms = {(x * x + 5 * y * y) % 5 for x in range(5) for y in range(5)} - {0}
    for chi in sds:
        rho = restrict_to_F(chi)
        for a in range(1, 5):
            assert rho(LocalElement.from_int(F5, a)) == (1 if a in norms else -1)
        assert rho(el(F5, 1)) == Fraction(1, 5)  # tau(5)|5| = 1/5


def test_mu_p_examples():
    emb = PrimeEmbedding(7, 5, 20)
    assert not mu_p_is_zero(trivial_char(F5), emb)
    assert mu_p_is_zero(MulChar(F5, 1, [Fraction(1, 2)]), emb)


chars_inert = characters_with_conductor(INERT3, 1, [(Fraction(k, 4), 0) for k in range(4)])
chars_ram = characters_with_conductor(RAM5, 1, [(Fraction(k, 4), 0) for k in range(4)])


def qel(E, a, b, v):
    F = E.base
    x = QuadElement.of(E, a, b)
    return x * E.embed(LocalElement.from_unit(F, v, (1,))) if v >= 0 else x / E.embed(el(F, -v))


@given(st.sampled_from(chars_inert + chars_ram), st.integers(0, 24), st.integers(0, 24),
       st.integers(0, 24), st.integers(0, 24), st.integers(-2, 2))
def test_multiplicative(chi, a, b, c, d, v):
    E = chi.domain
    x, y = qel(E, a, b, v), qel(E, c, d, 0)
    if x.x.is_zero() and x.y.is_zero() or y.x.is_zero() and y.y.is_zero():
        return
    assert chi(x * y) == chi(x) * chi(y)


@given(st.sampled_from(chars_inert + chars_ram))
def test_conductor_rederived(chi):
    # trivial on 1 + varpi^a, not on the units (a = 1)
    E = chi.domain
    theta_pow = E.theta() if E.kind == "ramified" else E.embed(el(E.base, 1))
    one = QuadElement.of(E, 1)
    assert chi(one + theta_pow) == 1
    assert chi.conductor == 1


@given(st.sampled_from(chars_inert + chars_ram), st.integers(-3, 3))
def test_twist_roundtrip(chi, k):
    assert chi.abs_twist(k).abs_twist(-k) == chi
