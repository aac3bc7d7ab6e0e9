from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hll.cyclotomic import (PrimeEmbedding, cyc_arith, cyc_conjugate, get_ring, is_nonzero_mod_m,
                            reduce_mod_m, standard_ring)
from hll.errors import IncompatibleRingError, NotPIntegralError

from conftest import to_complex


def test_phi3_relation():
    R = get_ring(3, 7)
    assert (R.zeta(1) + R.zeta(2)) + 1 == 0


def test_sqrt_squared():
    s = get_ring(1, 5).sqrt_ell()
    assert s * s == 5


def test_zeta8_squared_vector():
    R = get_ring(8, 5)
    z = R.zeta(1)
    assert (z * z).a_coeffs() == [0, 0, 1, 0]


def test_ring_mismatch():
    with pytest.raises(IncompatibleRingError):
        cyc_arith(get_ring(3, 5).zeta(1), get_ring(5, 5).zeta(1), "add")


def test_division_by_zero():
    R = get_ring(3, 5)
    with pytest.raises(ZeroDivisionError):
        cyc_arith(R.one(), R.zero(), "div")


def test_conjugates():
    assert cyc_conjugate(get_ring(5, 3).zeta(1)) == get_ring(5, 3).zeta(4)
    R = standard_ring(7)
    x = R.rational(3) + R.sqrt_ell() * 2
    assert x.conj() == x
    z8 = get_ring(8, 3).zeta(1)
    assert z8.conj() == get_ring(8, 3).zeta(7) == -get_ring(8, 3).zeta(3)


def test_reduce_examples():
    emb = PrimeEmbedding(7, 3, 3)
    R = get_ring(3, 3)
    assert reduce_mod_m(R.zero(), emb).is_zero()
    assert reduce_mod_m(R.rational(7), emb).is_zero()
    img = reduce_mod_m(R.zeta(1) + 1, emb).c
    # roots of x^2 + x + 1 over F_7 are 2 and 4
    assert img[0] in (3, 5) and all(c == 0 for c in img[1:])


def test_is_nonzero_examples():
    emb = PrimeEmbedding(5, 3, 3)
    R = get_ring(3, 3)
    assert is_nonzero_mod_m(R.one(), emb)
    assert not is_nonzero_mod_m(R.rational(10), emb)
    assert is_nonzero_mod_m(1 - R.zeta(1), emb)


def test_not_p_integral():
    emb = PrimeEmbedding(5, 3, 3)
    with pytest.raises(NotPIntegralError):
        reduce_mod_m(get_ring(3, 3).rational(Fraction(1, 5)), emb)


def test_embedding_invariants():
    emb = PrimeEmbedding(11, 5, 40)
    z = emb.zeta_image(emb.N)
    one = emb.zeta_image(1)
    assert z ** emb.N == one
    for d in (2, 5, 8):
        assert not z ** (emb.N // d) == one
    assert emb.sqrt_ell_image() * emb.sqrt_ell_image() == emb.reduce(standard_ring(5).rational(5))


def test_embedding_rejects_p_power_order():
    with pytest.raises(ValueError):
        PrimeEmbedding(5, 3, 15)


coeff = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def number(draw, R):
    a = {k: draw(coeff) for k in range(R.phi)}
    return R.make(a, {})


@st.composite
def triples(draw):
    R = standard_ring(draw(st.sampled_from([3, 5])), draw(st.sampled_from([1, 3, 8])))
    return number(draw, R), number(draw, R), number(draw, R)


@given(triples())
def test_ring_axioms(t):
    x, y, z = t
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert abs(to_complex(x * y) - to_complex(x) * to_complex(y)) < 1e-6


@given(triples())
def test_conj_involution_and_division(t):
    x, y, _ = t
    assert x.conj().conj() == x
    assert abs(to_complex(x.conj()) - to_complex(x).conjugate()) < 1e-6
    if not y.is_zero():
        assert (x / y) * y == x


@given(st.integers(0, 119), st.integers(0, 119))
def test_roots_of_unity_have_norm_one(k, j):
    R = standard_ring(5, 24)
    u = R.zeta(k) * R.zeta(j)
    assert u * u.conj() == 1


@given(triples())
def test_reduction_is_homomorphism(t):
    x, y, _ = t
    emb = PrimeEmbedding(7, x.ring.ell, x.ring.M)
    rx, ry = emb.reduce(x), emb.reduce(y)
    assert emb.reduce(x * y) == rx * ry
    assert emb.reduce(x + y) == rx + ry


def test_json_roundtrip():
    from hll.cyclotomic import CycNumber
    x = standard_ring(7, 9).zeta(4) * Fraction(2, 7) + 1
    assert CycNumber.from_json(x.to_json()) == x
