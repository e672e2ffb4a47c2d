import pytest
from hypothesis import given, settings, strategies as st

from domain.exceptions import (
    InsufficientPrecisionError,
    MisalignedSeriesError,
    NotInvertibleError,
    TruncationWindowError,
)
from domain.models.series import (
    QSeries,
    eq_to_order,
    extract_power,
    first_mismatch,
    from_monomial,
    invert_unit,
    one,
    substitute_power,
    zero,
)

ORDER = 30

coefficient_maps = st.dictionaries(st.integers(0, ORDER - 1), st.integers(-5, 5), max_size=8)


def series(coeffs) -> QSeries:
    return QSeries(coeffs, ORDER)


class TestQSeriesBasics:
    def test_from_monomial(self):
        s = from_monomial(3, 4, 10)

        assert s.coefficients() == [0, 0, 0, 0, 3, 0, 0, 0, 0, 0]
        assert s.valuation == 4

    def test_from_monomial_outside_window(self):
        with pytest.raises(TruncationWindowError):
            from_monomial(1, 10, 10)

    def test_zero_coefficients_are_not_stored(self):
        s = QSeries({0: 1, 3: 0, 5: 2, 40: 7}, 10)

        assert list(s.items()) == [(0, 1), (5, 2)]

    def test_coefficient_beyond_order(self):
        with pytest.raises(InsufficientPrecisionError):
            one(5).coeff(5)

    def test_text_form(self):
        s = QSeries({0: 1, 1: -2, 4: 1}, 6)

        assert str(s) == "1 - 2q + q^4 + O(q^6)"

    def test_shift_moves_window(self):
        s = one(5).shift(-2)

        assert s.min_exp == -2
        assert s.order == 3


class TestArithmetic:
    @given(coefficient_maps, coefficient_maps)
    def test_addition_commutes(self, f, g):
        assert series(f) + series(g) == series(g) + series(f)

    @given(coefficient_maps, coefficient_maps, coefficient_maps)
    @settings(max_examples=50)
    def test_multiplication_associates(self, f, g, h):
        a, b, c = series(f), series(g), series(h)
        left, right = (a * b) * c, a * (b * c)

        assert min(left.order, right.order) >= ORDER
        assert first_mismatch(left, right, ORDER) is None

    @given(coefficient_maps, coefficient_maps, coefficient_maps)
    @settings(max_examples=50)
    def test_distributive(self, f, g, h):
        a, b, c = series(f), series(g), series(h)
        left, right = a * (b + c), a * b + a * c

        assert min(left.order, right.order) >= ORDER
        assert first_mismatch(left, right, ORDER) is None

    @given(coefficient_maps)
    def test_negation_cancels(self, f):
        s = series(f)

        assert (s + (-s)).is_zero()

    def test_product_order_uses_valuations(self):
        # the first factor is unknown from q^10 on
        product = from_monomial(1, 2, 10) * QSeries({0: 1, 1: 1}, 10)

        assert product.order == 10
        assert list(product.items()) == [(2, 1), (3, 1)]


class TestInversion:
    @given(coefficient_maps, st.sampled_from([1, -1]))
    def test_inverse_times_series_is_one(self, f, unit):
        coeffs = dict(f)
        coeffs[0] = unit
        s = series(coeffs)

        assert s * invert_unit(s) == one(ORDER)

    def test_geometric_series(self):
        inverse = invert_unit(QSeries({0: 1, 1: -1}, 8))

        assert inverse.coefficients() == [1] * 8

    def test_non_unit_constant(self):
        with pytest.raises(NotInvertibleError):
            invert_unit(QSeries({0: 2, 1: 1}, 8))

    def test_zero_constant(self):
        with pytest.raises(NotInvertibleError):
            invert_unit(QSeries({1: 1}, 8))


class TestPowerSubstitution:
    @given(coefficient_maps, st.integers(1, 5))
    def test_extract_undoes_substitute(self, f, k):
        s = series(f)

        assert extract_power(substitute_power(s, k), k) == s

    def test_substitute_window(self):
        s = substitute_power(QSeries({0: 1, 1: 1}, 3), 4)

        assert s.order == 9
        assert list(s.items()) == [(0, 1), (4, 1)]

    def test_extract_rejects_stray_exponent(self):
        with pytest.raises(MisalignedSeriesError):
            extract_power(QSeries({0: 1, 3: 1}, 10), 2)

    def test_nonpositive_power(self):
        with pytest.raises(ValueError):
            substitute_power(one(4), 0)


class TestComparison:
    def test_first_mismatch(self):
        f = QSeries({0: 1, 3: 1, 5: 2}, 10)
        g = QSeries({0: 1, 5: 2}, 10)

        assert first_mismatch(f, g, 10) == 3
        assert eq_to_order(f, g, 3)
        assert not eq_to_order(f, g, 4)

    def test_compare_beyond_precision(self):
        with pytest.raises(InsufficientPrecisionError):
            eq_to_order(zero(5), zero(10), 6)


class TestTruncationConsistency:
    """Working at a higher order and truncating agrees with working at the lower order."""

    @given(coefficient_maps, coefficient_maps, st.integers(1, ORDER))
    def test_multiplication(self, f, g, m):
        # Arrange
        a, b = series(f), series(g)

        # Act
        high = (a * b).truncate(m)
        low = a.truncate(m) * b.truncate(m)

        # Assert
        assert low.order >= m
        assert first_mismatch(high, low, m) is None

    @given(coefficient_maps, st.sampled_from([1, -1]), st.integers(1, ORDER))
    def test_inversion(self, f, unit, m):
        coeffs = dict(f)
        coeffs[0] = unit
        s = series(coeffs)

        high = invert_unit(s).truncate(m)
        low = invert_unit(s.truncate(m))

        assert low.order == m
        assert first_mismatch(high, low, m) is None
