"""
Tests for q-series, eta products and the weight-14 theta identity.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisenlat.core.exceptions import ValidationError
from eisenlat.services.enumerate import theta_coeffs
from eisenlat.services.modforms import (
    N3_MIN2,
    QSeries,
    decompose_theta,
    delta3,
    eta_product,
    predicted_theta,
    theta_a2,
    theta_from_counts,
    weight14_basis,
)
from eisenlat.services.standard import standard


class TestQSeries:
    """Tests for truncated series arithmetic."""

    def test_precision_is_the_minimum(self):
        """Test that products and sums keep the lower precision."""
        a = QSeries.of([1, 1, 1, 1])
        b = QSeries.of([1, 2])
        assert (a * b).prec == 1
        assert (a + b).to_list() == [2, 3]

    def test_geometric_inverse(self):
        """Test (1 - q)(1 + q + q^2 + ...) = 1."""
        assert (QSeries.of([1, -1, 0, 0, 0]) * QSeries.of([1] * 5)).to_list() == [1, 0, 0, 0, 0]

    def test_power(self):
        """Test (1 + q)^3 = 1 + 3q + 3q^2 + q^3."""
        assert (QSeries.of([1, 1], 4) ** 3).to_list() == [1, 3, 3, 1, 0]

    def test_str(self):
        """Test the printed form."""
        assert str(QSeries.of([1, -6, 0, 9])) == "1 - 6q + 9q^3 + O(q^4)"

    def test_index_beyond_precision(self):
        """Test that reading past the precision raises."""
        with pytest.raises(IndexError):
            QSeries.of([1, 2])[2]


class TestThetaAndDelta:
    """Tests for the building blocks of the weight-14 space."""

    def test_delta3(self, fixture_json):
        """Test eta(q)^6 eta(q^3)^6 against the fixture."""
        assert delta3(3).to_list() == fixture_json("exceptional.json")["delta3"]

    def test_theta_a2(self, fixture_json):
        """Test the first coefficients of the Z[w] theta series."""
        assert theta_a2(4).to_list() == fixture_json("exceptional.json")["theta_a2"]

    def test_fractional_eta_power(self):
        """Test that eta(q) alone is rejected."""
        with pytest.raises(ValueError):
            eta_product([(1, 1)], 5)

    def test_basis(self, fixture_json):
        """Test the three basis series to q^3."""
        expected = fixture_json("exceptional.json")["weight14_basis"]
        b0, b1, b2 = weight14_basis(3)
        assert b0.to_list() == expected["theta14"]
        assert b1.to_list() == expected["theta8_delta"]
        assert b2.to_list() == expected["theta2_delta2"]


class TestWeight14:
    """Tests for the theta series of rank-14 unimodular lattices."""

    @given(st.integers(0, 300).map(lambda k: 6 * k))
    def test_norm3_count_is_constant(self, mu2):
        """Test that every minimum-2 theta series has 17472 vectors of norm 3."""
        assert predicted_theta(mu2, 3)[3] == N3_MIN2

    def test_i14(self):
        """Test that theta(I14) is the first basis element."""
        assert decompose_theta(theta_a2(6) ** 14) == (0, 0)

    def test_i14_enumerated(self):
        """Test the identity against enumeration of I14 up to q^3."""
        theta = QSeries.of(theta_coeffs(standard("I14"), 3))
        assert theta == weight14_basis(3)[0]

    def test_round_trip_counts(self):
        """Test that decompose_theta inverts theta_from_counts."""
        theta = theta_from_counts(0, 1092, 6)
        a, c = decompose_theta(theta)
        assert a == -84
        assert c == 1092 + 252

    def test_outside_space(self):
        """Test that a series outside the span reports the first bad coefficient."""
        bad = QSeries.of([0, 0, 0, 0, 1]) + theta_from_counts(0, 0, 4)
        with pytest.raises(ValidationError) as exc:
            decompose_theta(bad)
        assert exc.value.offending[0] == 4

    def test_low_precision(self):
        """Test that precision below 3 cannot be decomposed."""
        with pytest.raises(ValidationError):
            decompose_theta(QSeries.of([1, 0, 0]))

    @pytest.mark.slow
    def test_glued_lattice(self, recipes):
        """Test the identity on a constructed rank-14 lattice with 1092 roots."""
        from eisenlat.services.construct import build_recipe

        L = build_recipe(recipes["t1n1"])
        theta = QSeries.of(theta_coeffs(L, 3))
        assert theta == predicted_theta(1092, 3)
