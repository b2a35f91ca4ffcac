"""
Tests for mass constants and catalog partial sums.
"""

from fractions import Fraction

import pytest

from eisenlat.core.exceptions import ValidationError
from eisenlat.models.schemas import CatalogRow
from eisenlat.services.mass import approx_check, mass_report, published_constants, parse_fraction, partial_mass


class TestConstants:
    """Tests for the exact mass fractions."""

    def test_parse_fraction(self):
        """Test factored denominators."""
        assert parse_fraction("3/2^2.5") == Fraction(3, 20)
        assert parse_fraction("7") == 7

    def test_malformed(self):
        """Test that a malformed factorisation raises."""
        with pytest.raises(ValidationError):
            parse_fraction("1/2^x")

    def test_constants_are_positive(self):
        """Test that every constant parses to a positive fraction."""
        c = published_constants()
        assert len(c.exact) == 8
        assert all(v > 0 for v in c.exact.values())

    def test_approximations(self):
        """Test M14 and M15 against their printed values; the other ranks are printed only."""
        status = {e["printed"]: e["status"] for e in approx_check()}
        assert status["0.000012"] == "ok"
        assert status["0.0045"] == "ok"
        assert status["0.00000014"] == "printed-only"
        assert status["6.57"] == "printed-only"

    def test_y14_mu2_exceeds_m14_mu2(self):
        """Test that the only inconsistency reported is Y14(2) > M14(2)."""
        mismatches = [e["printed"] for e in approx_check() if e["status"] == "mismatch"]
        assert mismatches == ["Y14(2) < M14(2)"]

    def test_y_below_m(self):
        """Test Y_n < M_n for the unweighted masses."""
        c = published_constants()
        assert c["Y14"] < c["M14"]
        assert c["Y15"] < c["M15"]
        assert c["Y15(2)"] < c["M15(2)"]

    def test_to_dict(self):
        """Test the JSON view keeps the factored text."""
        data = published_constants().to_dict()
        assert data["exact"]["M14"]["factored"] == "689532652191539/2^25.3^19.5^3.11"
        assert data["approx"]["M16"] == "6.57"


class TestPartialMass:
    """Tests for sums over the catalog."""

    def test_exact_sums(self, catalog_rows, fixture_json):
        """Test the rank-14 and rank-15 sums against the fixture."""
        expected = fixture_json("partial_masses.json")
        for rank in (14, 15):
            report = mass_report(catalog_rows, rank)
            assert report["mass"] == expected[str(rank)]["mass"]
            assert report["mass_mu2"] == expected[str(rank)]["mass_mu2"]

    def test_strictly_below(self, catalog_rows):
        """Test that the indecomposable rows stay strictly below Y_n."""
        for rank in (14, 15):
            report = mass_report(catalog_rows, rank)
            assert report["below_Y"]
            assert report["below_Y(2)"]

    def test_rank14_deficit(self, catalog_rows, fixture_json):
        """Test that the rank-14 deficit is a single 1/|G|: the decomposable E8 + U6."""
        report = mass_report(catalog_rows, 14)
        deficit = fixture_json("partial_masses.json")["14"]["mass_deficit"]
        assert Fraction(report["deficit"]) == parse_fraction(deficit)
        assert report["rows"] == 58

    def test_unknown_rank(self, catalog_rows):
        """Test that only ranks 14 and 15 have constants."""
        with pytest.raises(ValidationError):
            mass_report(catalog_rows, 13)

    def test_unresolved_conjugate(self):
        """Test that a conjugate row must be resolved before summing."""
        with pytest.raises(ValidationError):
            partial_mass([CatalogRow(rank=14, no=2, conjugate_of=1)])

    def test_weighted_sum(self):
        """Test sum mu2/|G| on two synthetic rows."""
        rows = [
            CatalogRow(rank=14, no=1, root_system="empty", group_order="2.3", mu2=0),
            CatalogRow(rank=14, no=2, root_system="A_1", group_order="2^2.3", mu2=6),
        ]
        assert partial_mass(rows) == (Fraction(1, 6) + Fraction(1, 12), Fraction(1, 2))
