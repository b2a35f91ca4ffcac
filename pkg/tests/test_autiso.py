"""
Tests for automorphism groups and isometry testing.
"""

import pytest
from hypothesis import HealthCheck, given, settings

from eisenlat.core.exceptions import BudgetExceeded, ValidationError
from eisenlat.models.eisenstein import EisInt, EisRat
from eisenlat.models.lattice import AmbientSpace, HermitianLattice, conjugate
from eisenlat.services import autiso
from eisenlat.services.autiso import (
    automorphism_group,
    automorphism_group_bruteforce,
    is_automorphism,
    is_isometric,
    is_isometry,
    orbit,
)
from eisenlat.services.construct import build_recipe, from_code, load_code
from eisenlat.services.reduction import reduced_basis
from eisenlat.services.standard import standard
from tests.conftest import sublattices_of_in


class TestAutomorphismGroup:
    """Tests for generators and orders of G(L)."""

    def test_i1(self, i1):
        """Test that G(Z[w]) is the six units."""
        report = automorphism_group(i1)
        assert report.order == 6

    @pytest.mark.parametrize("name,order", [("I2", 72), ("I3", 1296)])
    def test_standard_lattice(self, name, order):
        """Test |G(I_n)| = 6^n n!."""
        assert automorphism_group(standard(name)).order == order

    @pytest.mark.parametrize("name", ["I2", "A_2", "I3", "A_3", "D_3(sqrt-3)"])
    def test_matches_bruteforce(self, name):
        """Test the orbit-stabilizer order against counting every basis image."""
        L = standard(name)
        assert automorphism_group(L).order == automorphism_group_bruteforce(L)

    def test_generators_preserve_form(self, a2):
        """Test that every reported generator is an automorphism."""
        report = automorphism_group(a2)
        assert report.generators
        assert all(is_automorphism(a2, g.matrix) for g in report.generators)
        assert report.order == report.orbit_lengths[0] * report.orbit_lengths[1]

    def test_to_dict(self, i1):
        """Test the JSON view of the report."""
        data = automorphism_group(i1).to_dict()
        assert data["order"] == "6"
        assert data["order_factored"] == "2.3"

    def test_non_integral(self):
        """Test that a non-integral lattice is rejected."""
        L = HermitianLattice(AmbientSpace.standard(1), [[EisRat(1, 2)]])
        with pytest.raises(ValidationError):
            automorphism_group(L)

    def test_bruteforce_rank_limit(self):
        """Test that brute force refuses rank 4."""
        with pytest.raises(ValidationError):
            automorphism_group_bruteforce(standard("I4"))

    def test_budget_keeps_partial_generators(self, monkeypatch, i1):
        """Test that an exhausted budget reports the generators found so far."""

        def out_of_time(*args, **kwargs):
            raise BudgetExceeded("search budget of 0s exhausted", 0.0)

        monkeypatch.setattr(autiso, "_extend", out_of_time)
        with pytest.raises(BudgetExceeded) as exc:
            automorphism_group(standard("I2"))
        assert len(exc.value.partial["generators"]) == 2
        assert "orbit_lengths" in exc.value.partial

    def test_clock(self):
        """Test that the clock only checks time every 256 nodes."""
        clock = autiso._Clock(-1.0)
        for _ in range(255):
            clock.tick()
        with pytest.raises(BudgetExceeded):
            clock.tick()

    @pytest.mark.slow
    def test_u6(self, u6, fixture_json):
        """Test |G(U6)| = 2^9.3^7.5.7."""
        assert automorphism_group(u6).order == fixture_json("exceptional.json")["u6_group_order"]


class TestOrbit:
    """Tests for orbits under explicit generators."""

    def test_unit_orbit(self):
        """Test that multiplication by -w generates all six unit multiples."""
        gen = [[EisInt(0, -1)]]
        assert len(orbit([EisInt(1)], [gen])) == 6


class TestIsometry:
    """Tests for isometry witnesses."""

    def test_alias(self):
        """Test that D_2(sqrt-3) and A_2 are isometric with a checked witness."""
        L1, L2 = standard("D_2(sqrt-3)"), standard("A_2")
        witness = is_isometric(L1, L2)
        assert witness is not None
        assert is_isometry(L1, L2, witness.matrix)

    def test_code_lift(self):
        """Test that the repetition-code lift is isometric to I2."""
        assert is_isometric(from_code(load_code("i2")), standard("I2")) is not None

    def test_conjugate_of_u6(self, u6):
        """Test that U6 is isometric to its complex conjugate."""
        assert is_isometric(u6, conjugate(u6)) is not None

    @pytest.mark.parametrize("a,b", [("A_2", "I2"), ("D_4(2)", "D_4(sqrt-3)"), ("I3", "A_3")])
    def test_not_isometric(self, a, b):
        """Test that lattices with different invariants are told apart."""
        assert is_isometric(standard(a), standard(b)) is None

    def test_rank_mismatch(self):
        """Test that different ranks are never isometric."""
        assert is_isometric(standard("I2"), standard("I3")) is None

    @given(sublattices_of_in(), sublattices_of_in())
    @settings(max_examples=20, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_reflexive_and_symmetric(self, L1, L2):
        """Test that every lattice is isometric to itself and the answer does not depend on argument order."""
        assert is_isometric(L1, L1) is not None
        assert is_isometric(L1, reduced_basis(L1)) is not None
        assert (is_isometric(L1, L2) is None) == (is_isometric(L2, L1) is None)
        assert (is_isometric(L1, conjugate(L1)) is None) == (is_isometric(conjugate(L1), L1) is None)

    def test_worker_count_does_not_change_witness(self):
        """Test that splitting the first level over two workers returns the single-worker witness."""
        L1, L2 = standard("I2"), from_code(load_code("i2"))
        one = is_isometric(L1, L2, threads=1)
        two = is_isometric(L1, L2, threads=2)
        assert one is not None and two is not None
        assert one.matrix == two.matrix

    def test_invariants_separate_conjugates(self, recipes):
        """Test that the glue of the minimal vectors tells t2n13 from its conjugate."""
        L = build_recipe(recipes["t2n13"])
        assert autiso._minimal_divisors(L) != autiso._minimal_divisors(conjugate(L))

    @pytest.mark.slow
    def test_conjugate_pair_not_isometric(self, recipes):
        """Test that t2n13 is decided non-isometric to its conjugate within the default budget."""
        L = build_recipe(recipes["t2n13"])
        assert is_isometric(L, conjugate(L)) is None
        assert is_isometric(conjugate(L), L) is None


class TestBruteForceOracle:
    """Tests comparing the group order with exhaustive counting."""

    @pytest.mark.slow
    @given(sublattices_of_in())
    @settings(max_examples=20, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_random_sublattices(self, L):
        """Test |G(L)| against counting basis images on random sublattices of rank at most 3."""
        R = reduced_basis(L)
        assert automorphism_group(L).order == automorphism_group_bruteforce(R)
