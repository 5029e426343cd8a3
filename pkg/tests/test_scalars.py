"""
Tests for cyclotomic numbers, roots of unity and loop monomials
"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semifix.errors import InsufficientCyclotomicOrder
from semifix.scalars import (
    CyclotomicNumber,
    LoopMonomial,
    RootOfUnityExp,
    cyclotomic_polynomial,
    euler_phi,
    format_rational,
    minimal_cyclotomic_order,
    monomial_roots,
    norm_F_over_k,
    root_of_unity,
    root_of_unity_exponent,
    unit_group_order,
)


class TestRationals:
    def test_format_rational(self):
        assert format_rational(Fraction(3, 1)) == "3"
        assert format_rational(Fraction(-2, 6)) == "-1/3"

    def test_euler_phi(self):
        assert [euler_phi(m) for m in (1, 2, 3, 4, 6, 12)] == [1, 1, 2, 2, 2, 4]


class TestCyclotomicPolynomial:
    @pytest.mark.parametrize("order,expected", [
        (1, (-1, 1)),
        (2, (1, 1)),
        (3, (1, 1, 1)),
        (4, (1, 0, 1)),
        (6, (1, -1, 1)),
    ])
    def test_small_orders(self, order, expected):
        assert cyclotomic_polynomial(order) == expected

    def test_degree_is_phi(self):
        for order in range(1, 25):
            assert len(cyclotomic_polynomial(order)) == euler_phi(order) + 1

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError, match="must be positive"):
            cyclotomic_polynomial(0)


class TestCyclotomicNumber:
    def test_zeta_has_exact_order(self):
        z = CyclotomicNumber.zeta(3)
        assert not z.is_one()
        assert (z ** 3).is_one()

    def test_one_plus_zeta_plus_zeta_squared(self):
        z = CyclotomicNumber.zeta(3)
        assert (CyclotomicNumber.one(3) + z + z ** 2).is_zero()

    def test_i_squared(self):
        i = CyclotomicNumber.zeta(4)
        assert i * i == CyclotomicNumber.rational(4, -1)

    def test_inverse(self):
        x = CyclotomicNumber.rational(5, 2) + CyclotomicNumber.zeta(5, 2)
        assert (x * x.inverse()).is_one()
        assert (x / x).is_one()

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError, match="Inverse of zero"):
            CyclotomicNumber.zero(3).inverse()

    def test_wrong_coefficient_count(self):
        with pytest.raises(ValueError, match="needs 2 coefficients"):
            CyclotomicNumber(3, (1,))

    def test_galois_and_conj(self):
        z = CyclotomicNumber.zeta(5)
        assert z.galois(2) == CyclotomicNumber.zeta(5, 2)
        assert z.conj() == CyclotomicNumber.zeta(5, 4)
        assert (z * z.conj()).is_one()

    def test_galois_needs_coprime_exponent(self):
        with pytest.raises(ValueError, match="not an automorphism"):
            CyclotomicNumber.zeta(6).galois(2)

    def test_rational_value(self):
        assert CyclotomicNumber.rational(7, Fraction(3, 4)).rational_value() == Fraction(3, 4)
        assert CyclotomicNumber.zeta(7).rational_value() is None

    def test_str(self):
        assert str(CyclotomicNumber.zeta(3)) == "zeta(1/3)"
        assert str(CyclotomicNumber.rational(3, 2)) == "cyclo3[2, 0]"

    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=-20, max_value=20))
    def test_zeta_powers_wrap(self, order, exponent):
        z = CyclotomicNumber.zeta(order)
        assert z ** exponent == z ** (exponent % order)


class TestRootsOfUnity:
    def test_unit_group_order(self):
        assert unit_group_order(3) == 6
        assert unit_group_order(4) == 4
        assert unit_group_order(1) == 2

    def test_minus_one_in_odd_order(self):
        assert root_of_unity(3, Fraction(1, 2)) == CyclotomicNumber.rational(3, -1)

    def test_sixth_root_in_q_zeta_3(self):
        z = CyclotomicNumber.zeta(3)
        assert root_of_unity(3, Fraction(1, 6)) == -(z ** 2)

    def test_exponent_round_trip(self):
        for j in range(12):
            e = Fraction(j, 12)
            assert root_of_unity_exponent(root_of_unity(12, e)) == e

    def test_not_a_root_of_unity(self):
        assert root_of_unity_exponent(CyclotomicNumber.rational(4, 2)) is None

    def test_insufficient_order(self):
        with pytest.raises(InsufficientCyclotomicOrder) as excinfo:
            root_of_unity(3, Fraction(1, 4))
        assert excinfo.value.minimal_order == 12

    def test_minimal_cyclotomic_order(self):
        assert minimal_cyclotomic_order(6) == 3
        assert minimal_cyclotomic_order(4) == 4
        assert minimal_cyclotomic_order(2) == 1


class TestLoopMonomial:
    def test_normalizes_coefficient(self):
        assert LoopMonomial.of(Fraction(4, 3), 1) == LoopMonomial.of(Fraction(1, 3), 1)
        assert RootOfUnityExp(Fraction(-1, 4)).value == Fraction(3, 4)

    def test_arithmetic(self):
        x = LoopMonomial.of(Fraction(1, 3), 2)
        assert (x * x.inverse()).is_one()
        assert (x / x).is_one()
        assert x ** 3 == LoopMonomial.of(0, 6)
        assert -LoopMonomial.one() == LoopMonomial.of(Fraction(1, 2), 0)

    def test_str(self):
        assert str(LoopMonomial.of(Fraction(1, 3), 2)) == "zeta(1/3)*tau^(2)"

    def test_integrality(self):
        assert LoopMonomial.of(0, 3).is_integral()
        assert not LoopMonomial.of(0, Fraction(1, 2)).is_integral()

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=-5, max_value=5),
           st.fractions(min_value=0, max_value=1, max_denominator=12))
    def test_roots_are_roots(self, r, val, coeff):
        x = LoopMonomial.of(coeff, val)
        roots = monomial_roots(x, r)
        assert len(set(roots)) == r
        assert all(root ** r == x for root in roots)

    def test_roots_reject_zero_degree(self):
        with pytest.raises(ValueError, match="must be positive"):
            monomial_roots(LoopMonomial.one(), 0)

    def test_norm_of_t(self):
        # t * (-t) = -t^2 = -tau
        assert norm_F_over_k(LoopMonomial.of(0, 1), 2) == LoopMonomial.of(Fraction(1, 2), 1)

    def test_norm_of_root_of_unity(self):
        assert norm_F_over_k(LoopMonomial.of(Fraction(1, 6), 0), 3) == LoopMonomial.of(Fraction(1, 2), 0)

    def test_norm_rejects_fractional_valuation(self):
        with pytest.raises(ValueError, match="integral t-valuation"):
            norm_F_over_k(LoopMonomial.of(0, Fraction(1, 2)), 2)
