"""
Tests for the standard lattice presentations.
"""

import pytest

from eisenlat.core.exceptions import ValidationError
from eisenlat.services.standard import MAX_RANK, lattice_d, standard


class TestStandardNames:
    """Tests for name parsing in standard()."""

    @pytest.mark.parametrize("name,rank", [
        ("I14", 14), ("I_3", 3), ("A_13", 13), ("D_14(2)", 14), ("D_5(sqrt-3)", 5),
        ("D_5(√-3)", 5), ("E_6", 6), ("E7", 7), ("U_5", 5), ("U6", 6),
    ])
    def test_names(self, name, rank):
        """Test that accepted names build a lattice of the right rank."""
        assert standard(name).rank == rank

    @pytest.mark.parametrize("name", ["D_5", "E_9", "U_4", "X3", "A_2(2)", f"I{MAX_RANK + 1}"])
    def test_rejected(self, name):
        """Test that unknown or malformed names raise ValidationError."""
        with pytest.raises(ValidationError):
            standard(name)

    def test_cached(self):
        """Test that repeated calls share one object."""
        assert standard("U6") is standard("U6")


class TestStandardLattices:
    """Tests for integrality and discriminants."""

    @pytest.mark.parametrize("name", ["A_4", "D_6(2)", "D_6(sqrt-3)", "E_6", "E_7", "E_8", "U5", "U6"])
    def test_integral(self, name):
        """Test that every root lattice presentation is integral."""
        assert standard(name).is_integral()

    def test_discriminant_fixture(self, fixture_json):
        """Test discriminants against the fixture table."""
        for name, d in fixture_json("root_counts.json")["discriminants"].items():
            assert str(standard(name).discriminant) == d, name

    def test_d_parameter(self):
        """Test that D_n only accepts 2 and sqrt-3."""
        with pytest.raises(ValidationError):
            lattice_d(4, "3")
        assert lattice_d(4, "2").discriminant == 4
        assert lattice_d(4, "sqrt-3").discriminant == 3
