import pytest
from hypothesis import assume, given, settings, strategies as st

from domain.exceptions import DivergentThetaError
from domain.models.evaluator import evaluate, evaluate_to
from domain.models.expr import quintuple_product
from domain.models.parser import parse
from domain.models.series import first_mismatch, from_monomial, zero
from domain.models.theta import (
    MonomialArg,
    dissect_theta,
    jacobi_triple_product,
    normalize_theta,
    pochhammer,
    rogers_ramanujan_sum,
    theta_series,
    theta_unit_split,
)
from tests.helpers import assert_same_series

signs = st.sampled_from([1, -1])


def q(exponent: int, sign: int = 1) -> MonomialArg:
    return MonomialArg(sign, exponent)


def monomial_series(m: MonomialArg, order: int):
    return from_monomial(m.sign, m.exponent, order)


class TestThetaSeries:
    def test_phi(self):
        assert theta_series(q(1), q(1), 10).coefficients() == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]

    def test_euler_function(self):
        # f(-q) = (q; q)_inf = 1 - q - q^2 + q^5 + q^7 - ...
        assert theta_series(q(1, -1), q(2, -1), 8).coefficients() == [1, -1, -1, 0, 0, 1, 0, 1]

    def test_divergent(self):
        with pytest.raises(DivergentThetaError):
            theta_series(q(0), q(0), 10)

    def test_minus_one_vanishes(self):
        for b in (q(1), q(3, -1), q(5)):
            assert theta_series(q(0, -1), b, 60).is_zero()

    @given(st.integers(1, 8), signs)
    def test_unit_split(self, alpha, sign):
        coeff, a, b = theta_unit_split(q(alpha, sign))

        lhs = theta_series(q(0), q(alpha, sign), 100)
        assert_same_series(lhs, theta_series(a, b, 100).scale(coeff), 100)

    @given(st.integers(-4, 8), st.integers(-4, 8), signs, signs)
    def test_symmetry(self, alpha, beta, sa, sb):
        assume(alpha + beta >= 1)

        assert theta_series(q(alpha, sa), q(beta, sb), 80) == theta_series(q(beta, sb), q(alpha, sa), 80)


class TestJacobiTripleProduct:
    @pytest.mark.parametrize("sa", [1, -1])
    @pytest.mark.parametrize("sb", [1, -1])
    def test_all_small_parameterizations(self, sa, sb):
        order = 150
        for total in range(1, 9):
            for alpha in range(total + 1):
                a, b = q(alpha, sa), q(total - alpha, sb)

                assert_same_series(theta_series(a, b, order), jacobi_triple_product(a, b, order), order)

    def test_euler_product(self):
        assert_same_series(
            theta_series(q(1, -1), q(2, -1), 200), pochhammer(q(1), q(1), 200), 200
        )

    def test_pochhammer_rejects_constant_base(self):
        with pytest.raises(DivergentThetaError):
            pochhammer(q(1), q(0), 10)


class TestShiftLaw:
    @given(st.integers(-12, 12), st.integers(-12, 12), signs, signs)
    def test_normalized_form_has_same_series(self, alpha, beta, sa, sb):
        assume(alpha + beta >= 1)
        a, b = q(alpha, sa), q(beta, sb)

        norm = normalize_theta(a, b)

        assert 0 <= norm.a.exponent <= norm.b.exponent
        order = 120
        # a negative shift moves the known window down by the same amount
        work = order + max(0, -norm.shift)
        rebuilt = theta_series(norm.a, norm.b, work).scale(norm.coeff).shift(norm.shift)
        direct = theta_series(a, b, order)
        assert rebuilt.order >= order
        assert first_mismatch(direct, rebuilt, order) is None

    def test_vanishing_flag(self):
        assert normalize_theta(q(3, -1), q(-2, -1)).vanishing


class TestDissection:
    @settings(max_examples=40)
    @given(st.integers(0, 4), st.integers(0, 4), signs, signs, st.integers(1, 5))
    def test_pieces_reassemble(self, alpha, beta, sa, sb, k):
        assume(alpha + beta >= 1)
        a, b = q(alpha, sa), q(beta, sb)
        order, compared = 250, 150

        total = zero(order)
        for term in dissect_theta(a, b, k):
            piece = theta_series(term.a, term.b, order) * monomial_series(term.factor, order)
            total = total + piece

        # negative exponents in the pieces cost at most 64 terms of window
        assert total.order >= compared
        assert first_mismatch(total, theta_series(a, b, order), compared) is None

    def test_rejects_zero_index(self):
        with pytest.raises(ValueError):
            dissect_theta(q(1), q(1), 0)


class TestQuintupleProduct:
    @pytest.mark.parametrize("lam_exp", range(1, 6))
    @pytest.mark.parametrize("x_exp", range(1, 6))
    def test_negative_arguments(self, x_exp, lam_exp):
        # Arrange
        lhs, rhs = quintuple_product(q(x_exp, -1), q(lam_exp, -1))
        order = 150

        # Act
        left, right = evaluate_to(lhs, order), evaluate_to(rhs, order)

        # Assert
        assert first_mismatch(left, right, order) is None

    @settings(max_examples=30)
    @given(st.integers(1, 3), st.integers(0, 3), signs, signs)
    def test_both_sides_agree(self, x_exp, lam_exp, x_sign, lam_sign):
        lhs, rhs = quintuple_product(q(x_exp, x_sign), q(lam_exp, lam_sign))
        order = 150

        left, right = evaluate_to(lhs, order), evaluate_to(rhs, order)

        assert first_mismatch(left, right, order) is None

class TestRogersRamanujan:
    @pytest.mark.parametrize("shift,name", [(0, "G"), (1, "H")])
    def test_sum_side_equals_product_side(self, shift, name):
        order = 200

        sum_side = rogers_ramanujan_sum(shift, order)

        assert_same_series(sum_side, evaluate(parse(f"{name}(q)"), order), order)

    def test_first_terms_of_g(self):
        # partitions into parts congruent to 1 or 4 mod 5
        assert rogers_ramanujan_sum(0, 10).coefficients() == [1, 1, 1, 1, 2, 2, 3, 3, 4, 5]
