"""
Tests for the algebra F, ground regimes and setup validation
"""

from fractions import Fraction

import pytest

from semifix.algebra import (
    EPSILON_SIGN,
    N_DIVIDES_M,
    NORM_COMPATIBILITY,
    SIGMA_COMMUTES,
    XI_IN_XI,
    EtaleAlgebraF,
    GroundRegime,
    SemilinearOperator,
    SetupParams,
    quadratic_discriminant_problem,
    twist,
    validate_params,
)
from semifix.errors import SetupValidationError
from semifix.scalars import CyclotomicNumber, LoopMonomial, root_of_unity


class TestEtaleAlgebra:
    @pytest.fixture
    def split(self):
        return EtaleAlgebraF(3, "split", "zeta_half")

    @pytest.fixture
    def gaussian(self):
        return EtaleAlgebraF(1, "quadratic", "identity", -1)

    def test_ranks(self, split, gaussian):
        assert EtaleAlgebraF(5).rank == 1
        assert split.rank == 2
        assert split.q_dim == 4
        assert gaussian.q_dim == 2

    def test_split_zeta_swaps_factors(self, split):
        x = (CyclotomicNumber.rational(3, 2), CyclotomicNumber.zeta(3))
        assert split.zeta(x) == (x[1], x[0])
        assert split.sigma(x) == split.zeta(x)

    def test_split_norm_is_product(self, split):
        x = (CyclotomicNumber.rational(3, 2), CyclotomicNumber.zeta(3))
        assert split.norm(x) == CyclotomicNumber.zeta(3) * 2

    def test_quadratic_arithmetic(self, gaussian):
        i = (CyclotomicNumber.zero(1), CyclotomicNumber.one(1))
        assert gaussian.mul(i, i) == gaussian.from_k(-1)
        assert gaussian.zeta(i) == gaussian.neg(i)
        assert gaussian.norm(i) == CyclotomicNumber.one(1)

    def test_inverse(self, split, gaussian):
        for alg in (split, gaussian):
            x = alg.add(alg.from_k(3), alg.q_basis[-1])
            assert alg.mul(x, alg.inverse(x)) == alg.one()

    def test_zero_divisor_has_no_inverse(self, split):
        e0 = (CyclotomicNumber.one(3), CyclotomicNumber.zero(3))
        assert not split.is_unit(e0)
        with pytest.raises(ZeroDivisionError):
            split.inverse(e0)

    def test_to_k(self, split):
        assert split.to_k(split.from_k(5)) == CyclotomicNumber.rational(3, 5)
        assert split.to_k(split.q_basis[0]) is None

    def test_coordinates_round_trip(self, split):
        x = (CyclotomicNumber.zeta(3), CyclotomicNumber.rational(3, Fraction(1, 2)))
        assert split.from_coordinates(split.coordinates(x)) == x

    def test_norm_preimage(self, split, gaussian):
        b = CyclotomicNumber.zeta(3, 2)
        assert split.norm(split.norm_preimage(b)) == b
        assert gaussian.norm(gaussian.norm_preimage(CyclotomicNumber.one(1))) == CyclotomicNumber.one(1)

    def test_minus_one_is_not_a_sum_of_two_squares(self, gaussian):
        assert gaussian.norm_preimage(CyclotomicNumber.rational(1, -1)) is None

    def test_structure_checks_pass(self, split, gaussian):
        assert split.structure_violations() == []
        assert gaussian.structure_violations() == []

    def test_conjugation_needs_nontrivial_k(self):
        problems = EtaleAlgebraF(2, "trivial", "conj").structure_violations()
        assert any("complex conjugation is trivial" in v.message for v in problems)


class TestQuadraticDiscriminant:
    def test_field(self):
        assert quadratic_discriminant_problem(-1, 1) is None
        assert quadratic_discriminant_problem(5, 3) is None

    def test_square(self):
        assert "is a square" in quadratic_discriminant_problem(9, 1)

    def test_already_in_k(self):
        assert "already lies" in quadratic_discriminant_problem(-1, 4)
        assert "already lies" in quadratic_discriminant_problem(-3, 6)

    def test_missing(self):
        assert "nonzero integer" in quadratic_discriminant_problem(None, 1)


class TestGroundRegime:
    def test_prime_degree(self):
        assert GroundRegime("numberfield", M=5).prime_degree == 4
        assert GroundRegime("numberfield", M=5, sigma_kind="conj").prime_degree == 2
        assert GroundRegime("loop", n=2).prime_degree is None

    def test_sigma_trivial_on_k(self):
        assert GroundRegime("loop", n=3, sigma_kind="identity").sigma_trivial_on_k
        assert not GroundRegime("loop", n=3, sigma_kind="minus_t").sigma_trivial_on_k

    def test_zeta_half_needs_even_n(self):
        violations = GroundRegime("loop", n=3, sigma_kind="zeta_half").structure_violations()
        assert [v.constraint for v in violations] == [SIGMA_COMMUTES]

    def test_minus_t_needs_odd_n(self):
        violations = GroundRegime("loop", n=2, sigma_kind="minus_t").structure_violations()
        assert [v.constraint for v in violations] == [SIGMA_COMMUTES]

    def test_presentation_must_match_n(self):
        violations = GroundRegime("numberfield", M=3, n=2).structure_violations()
        assert "has rank 1" in violations[0].message


class TestValidateParams:
    def test_fills_gamma(self, ve1_params):
        assert ve1_params.validated
        assert ve1_params.gamma.is_one()
        assert ve1_params.xi_in_Xi is True
        assert ve1_params.warnings == ()

    def test_norm_compatibility(self):
        regime = GroundRegime("numberfield", M=4)
        p = SetupParams(regime=regime, m=2, beta=root_of_unity(4, Fraction(1, 4)),
                        xi=regime.field.one(), c=regime.field.one())
        with pytest.raises(SetupValidationError, match="norm-compatibility") as excinfo:
            validate_params(p)
        assert excinfo.value.violations[0].constraint == NORM_COMPATIBILITY

    def test_collects_every_violation(self):
        regime = GroundRegime("numberfield", M=3, n=1)
        p = SetupParams(regime=regime, m=0, beta=CyclotomicNumber.one(3), xi=regime.field.one(),
                        epsilon=2, c=regime.field.one())
        with pytest.raises(SetupValidationError) as excinfo:
            validate_params(p)
        constraints = [v.constraint for v in excinfo.value.violations]
        assert N_DIVIDES_M in constraints
        assert EPSILON_SIGN in constraints

    def test_xi_outside_warns(self, nf_params):
        p = nf_params(4, 2, xi="1/4")
        assert p.xi_in_Xi is False
        assert any(XI_IN_XI in w for w in p.warnings)

    def test_polarized_needs_c(self):
        regime = GroundRegime("numberfield", M=1)
        p = SetupParams(regime=regime, m=1, beta=CyclotomicNumber.one(1), xi=regime.field.one())
        with pytest.raises(SetupValidationError, match="needs c"):
            validate_params(p)

    def test_c_must_be_sigma_fixed(self):
        regime = GroundRegime("numberfield", M=1, n=2, sigma_kind="zeta_half", presentation="split")
        alg = regime.field
        c = (CyclotomicNumber.rational(1, 2), CyclotomicNumber.rational(1, Fraction(1, 2)))
        p = SetupParams(regime=regime, m=2, beta=CyclotomicNumber.one(1), xi=alg.one(), c=c)
        with pytest.raises(SetupValidationError, match="sigma\\(c\\) != c"):
            validate_params(p)

    def test_loop_fractional_valuation(self):
        regime = GroundRegime("loop", M=2, n=1)
        p = SetupParams(regime=regime, m=2, beta=LoopMonomial.of(0, Fraction(1, 2)), xi=LoopMonomial.one(),
                        gamma=LoopMonomial.one())
        with pytest.raises(SetupValidationError, match="fractional tau-valuation"):
            validate_params(p)

    def test_loop_primitive_norm(self, loop_params):
        p = loop_params(2, 6, beta=LoopMonomial.one(), xi=LoopMonomial.of(Fraction(1, 6), 0),
                        gamma=LoopMonomial.one())
        assert p.xi_norm == LoopMonomial.of(Fraction(1, 3), 0)
        assert p.xi_norm_primitive is True

    def test_linear_mode_ignores_c(self, linear_params):
        assert linear_params.c is None
        assert not linear_params.polarized


class TestSemilinearOperator:
    def test_power_and_twist(self):
        alg = EtaleAlgebraF(1, "split", "identity")
        swap = [[alg.zero(), alg.one()], [alg.one(), alg.zero()]]
        op = SemilinearOperator.from_matrix(alg, swap)
        assert op.power_is_scalar(2, CyclotomicNumber.one(1))
        twisted = twist(op, alg.from_k(-1))
        assert twisted.power_is_scalar(2, CyclotomicNumber.one(1))
        assert not twisted.power_is_scalar(1, CyclotomicNumber.one(1))

    def test_apply_uses_zeta(self):
        alg = EtaleAlgebraF(1, "split", "identity")
        e0 = (CyclotomicNumber.one(1), CyclotomicNumber.zero(1))
        op = SemilinearOperator.from_matrix(alg, [[alg.one()]])
        assert op.apply([e0]) == [alg.zeta(e0)]
