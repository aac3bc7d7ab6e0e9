from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hll.errors import LevelError, PrecisionError, SchemaError
from hll.localfield import (AdditiveCharParams, LocalElement, LocalFieldDesc, QuadElement,
                            QuadExtDesc, lf_arith, psi0_eval, qe_arith, qe_norm_trace_conj,
                            unit_group_data)
from hll.cyclotomic import standard_ring

F3 = LocalFieldDesc(3)
F5 = LocalFieldDesc(5)


def test_valuation_additive():
    x = LocalElement.from_unit(F5, 1, (2,))
    y = LocalElement.from_unit(F5, 2, (3,))
    assert lf_arith(x, y, "mul").valuation() == 3


def test_unit_inverse():
    u = LocalElement.from_unit(F5, 0, (7,))
    assert u * u.inverse() == 1


def test_degree_two_multiplication():
    F = LocalFieldDesc(5, 2, lift_poly=(2, 0, 1))
    assert F.mul((0, 1), (0, 1), 25) == (23, 0)


def test_precision_error():
    with pytest.raises(PrecisionError):
        LocalElement.from_int(F3, 1, prec=F3.n_max + 5)


def test_not_a_unit():
    with pytest.raises(ValueError):
        LocalElement.from_unit(F3, 0, (3,))


def test_norm_trace_conj_examples():
    R = QuadExtDesc(F3, "ramified", (-3,))
    n, t, c = qe_norm_trace_conj(R.theta())
    assert n == 3 and n.valuation() == 1
    one = QuadElement.of(R, 1)
    n, t, c = qe_norm_trace_conj(one)
    assert (n, t) == (1, 2) and c == one
    E = QuadExtDesc(F3, "inert", (-1,))
    n, _, _ = qe_norm_trace_conj(QuadElement.of(E, 1, 1))
    assert n == 2


def test_kind_validation():
    with pytest.raises(SchemaError):
        QuadExtDesc(F3, "inert", (1,))  # a square
    with pytest.raises(SchemaError):
        QuadExtDesc(F3, "ramified", (-9,))


def test_norm_valuations():
    E = QuadExtDesc(F3, "inert", (-1,))
    ell = E.embed(LocalElement.from_int(F3, 3))
    assert qe_norm_trace_conj(ell)[0] == 9


def test_psi0_examples():
    P = AdditiveCharParams(F3, 2)
    R = standard_ring(3, 9)
    assert psi0_eval(P, LocalElement.from_int(F3, 5), R) == 1
    # psi_3(x) = exp(-2 pi i {x}) and psi0(x) = psi(-x): psi0(1/3) = zeta_3
    assert psi0_eval(P, LocalElement.from_fraction(F3, Fraction(1, 3)), R) == R.zeta(R.M // 3)
    a = psi0_eval(P, LocalElement.from_fraction(F3, Fraction(1, 3)), R)
    b = psi0_eval(P, LocalElement.from_fraction(F3, Fraction(2, 3)), R)
    assert a * b == psi0_eval(P, LocalElement.from_int(F3, 1), R)
    with pytest.raises(LevelError):
        psi0_eval(P, LocalElement.from_fraction(F3, Fraction(1, 27)))


def test_unit_groups():
    ug = unit_group_data(F3, 1)
    assert ug.orders == (2,) and ug.gens == (2,)
    assert unit_group_data(F3, 2).orders == (6,)
    assert unit_group_data(QuadExtDesc(F3, "inert", (-1,)), 1).orders == (8,)
    assert sorted(unit_group_data(F5, 3).orders) in ([4, 25], [100])


@given(st.integers(1, 3 ** 6 - 1), st.integers(1, 3 ** 6 - 1), st.integers(-2, 2), st.integers(-2, 2))
def test_norm_multiplicative(a, b, c, d):
    for E in (QuadExtDesc(F3, "inert", (-1,)), QuadExtDesc(F3, "ramified", (-3,))):
        z = QuadElement.of(E, LocalElement.from_fraction(F3, Fraction(a, 3 ** 0)), c)
        w = QuadElement.of(E, d, LocalElement.from_fraction(F3, Fraction(b)))
        if z.x.is_zero() and z.y.is_zero() or w.x.is_zero() and w.y.is_zero():
            continue
        nz, tz, cz = qe_norm_trace_conj(z)
        nw, tw, cw = qe_norm_trace_conj(w)
        assert qe_norm_trace_conj(z * w)[0] == nz * nw
        assert qe_norm_trace_conj(qe_arith(z, w, "add"))[1] == tz + tw
        assert cz.conj() == z


@given(st.integers(1, 80), st.integers(-3, 3))
def test_psi0_trivial_on_O_nontrivial_below(u, v):
    if u % 3 == 0:
        return
    x = LocalElement.from_unit(F3, v, (u,))
    val = psi0_eval(AdditiveCharParams(F3, 4), x, standard_ring(3, 81))
    assert (val == 1) == (v >= 0)


@given(st.integers(1, 3 ** 5 - 1), st.integers(1, 3 ** 5 - 1))
def test_precision_monotonicity(a, b):
    if a % 3 == 0 or b % 3 == 0:
        return
    lo, hi = LocalFieldDesc(3, n_max=6), LocalFieldDesc(3, n_max=10)
    xl = LocalElement.from_unit(lo, 0, (a,)) * LocalElement.from_unit(lo, 1, (b,)).inverse()
    xh = LocalElement.from_unit(hi, 0, (a,)) * LocalElement.from_unit(hi, 1, (b,)).inverse()
    assert xl.valuation() == xh.valuation()
    n = xl.prec
    assert [c % 3 ** n for c in xh.unit] == [c % 3 ** n for c in xl.unit]
