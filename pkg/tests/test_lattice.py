"""
Tests for the lattice model: Gram data, duals, indices, trace form and files.
"""

from fractions import Fraction

import pytest
from hypothesis import given

from eisenlat.core.exceptions import NotContainedError, RankError, ValidationError
from eisenlat.models import matrix as mx
from eisenlat.models.eisenstein import OMEGA2, EisInt, EisRat
from eisenlat.models.lattice import (
    AmbientSpace,
    HermitianLattice,
    Line,
    conjugate,
    contains,
    coordinates_in_basis,
    dual,
    hermitian_from_trace,
    index,
    lattice_sum,
    orthogonal_sum,
    trace_lattice,
)
from eisenlat.services.standard import INV_SQRT_M3, standard
from tests.conftest import eisints


class TestDiscriminants:
    """Tests for discriminants of the standard lattices."""

    @pytest.mark.parametrize("name,d", [
        ("I1", 1), ("I14", 1), ("A_2", 3), ("A_5", 6), ("D_4(2)", 4), ("D_6(sqrt-3)", 3),
        ("E_6", 3), ("E_7", 2), ("E_8", 1), ("U5", 2), ("U6", 1),
    ])
    def test_standard_discriminant(self, name, d):
        """Test d(L) for the shipped presentations."""
        assert standard(name).discriminant == d

    def test_u6_is_unimodular(self, u6):
        """Test that U6 is integral with discriminant 1."""
        assert u6.is_integral()
        assert u6.is_unimodular()

    def test_gram_is_hermitian(self, u6):
        """Test G = G^* for the Gram matrix."""
        assert mx.conj_transpose(u6.gram) == u6.gram


class TestDualAndIndex:
    """Tests for duals and the index of nested lattices."""

    def test_dual_involution(self, a2):
        """Test that (L#)# = L."""
        assert dual(dual(a2)) == a2

    def test_unimodular_is_self_dual(self, u6):
        """Test that a unimodular lattice equals its dual."""
        assert dual(u6) == u6

    def test_index_of_d14(self):
        """Test |I14 / D14(2)| = 4 and d(sub) = d(sup) * index."""
        sub, sup = standard("D_14(2)"), standard("I14")
        assert index(sub, sup) == 4
        assert sub.discriminant == sup.discriminant * index(sub, sup)

    def test_index_of_a2_in_dual(self, a2):
        """Test |A2# / A2| = 9 = d(A2)^2."""
        assert index(a2, dual(a2)) == 9
        assert dual(a2).discriminant == Fraction(1, 3)

    def test_index_not_contained(self):
        """Test that a superlattice is not inside its sublattice."""
        with pytest.raises(NotContainedError):
            index(standard("I14"), standard("D_14(2)"))

    def test_sum_with_superlattice(self):
        """Test D14(2) + I14 = I14."""
        assert lattice_sum(standard("D_14(2)"), standard("I14")) == standard("I14")


class TestMembership:
    """Tests for coordinates and containment."""

    def test_u6_contains_its_glue(self, u6):
        """Test that (1/sqrt-3)(1, ..., 1) lies in U6 but not in I6."""
        glue = [INV_SQRT_M3] * 6
        assert contains(u6, glue)
        assert not contains(standard("I6"), glue)

    def test_coordinates_round_trip(self, u6):
        """Test that coordinates reproduce the vector."""
        c = [EisInt(1), EisInt(0, 1), EisInt(-2), EisInt(0), EisInt(1, 1), EisInt(3)]
        v = u6.vector(c)
        assert coordinates_in_basis(u6, v) == c


class TestConstructionErrors:
    """Tests for malformed lattice input."""

    def test_dependent_rows(self):
        """Test that dependent basis rows raise RankError."""
        with pytest.raises(RankError):
            HermitianLattice(AmbientSpace.standard(2), [[1, 0], [2, 0]])

    def test_row_length(self):
        """Test that rows must match the ambient dimension."""
        with pytest.raises(RankError):
            HermitianLattice.from_generators(AmbientSpace.standard(2), [[1, 0, 0]])

    def test_nonpositive_line(self):
        """Test that a line block needs a positive norm."""
        with pytest.raises(ValidationError):
            Line(Fraction(0))

    def test_from_generators_reduces(self):
        """Test that a redundant generating set gives the same module."""
        ambient = AmbientSpace.standard(2)
        L = HermitianLattice.from_generators(ambient, [[2, 0], [0, 1], [1, 1], [3, 0]])
        assert L == HermitianLattice.standard(2)


class TestOrthogonalSumAndConjugate:
    """Tests for orthogonal sums and complex conjugation."""

    def test_orthogonal_sum(self, a2, u6):
        """Test that ranks add and discriminants multiply."""
        S = orthogonal_sum(a2, u6)
        assert S.rank == 8
        assert S.discriminant == 3

    def test_sum_rescales_lines(self):
        """Test that a half-scaled ambient is joined by rescaling."""
        half = HermitianLattice(AmbientSpace.standard(2, Fraction(1, 2)), [[1, 1], [1, -1]])
        S = orthogonal_sum(standard("I1"), half)
        assert S.gram[1][1] == 1
        assert S.is_integral()

    def test_conjugate_involution(self, u6):
        """Test that conjugating twice is the identity and preserves d."""
        c = conjugate(u6)
        assert conjugate(c) == u6
        assert c.discriminant == u6.discriminant


class TestTraceForm:
    """Tests for the even Z-lattice Tr(h)."""

    def test_i1_trace_gram(self):
        """Test that Tr(h) on I1 is the A2 root lattice Gram."""
        assert trace_lattice(standard("I1")) == [[2, -1], [-1, 2]]

    @pytest.mark.parametrize("name", ["I3", "U6", "E_8"])
    def test_even_with_det_power_of_three(self, name):
        """Test that the trace form of a unimodular lattice is even with det 3^n."""
        L = standard(name)
        T = trace_lattice(L)
        assert all(T[i][i] % 2 == 0 for i in range(len(T)))
        assert mx.det(mx.to_rat(T)) == 3 ** L.rank

    @given(eisints())
    def test_hermitian_from_trace(self, h):
        """Test that (Tr h, Tr conj(w) h) recovers h."""
        assert hermitian_from_trace(h.trace(), (OMEGA2 * h).trace()) == h


class TestLatticeFile:
    """Tests for the lattice file codec."""

    @pytest.mark.parametrize("name", ["A_2", "U6", "E_7", "D_5(sqrt-3)"])
    def test_round_trip(self, name):
        """Test that from_file(to_file(L)) is the same module with the same name."""
        L = standard(name)
        M = HermitianLattice.from_file(L.to_file())
        assert M == L
        assert M.name == L.name

    def test_rejects_bad_entries(self):
        """Test that unparseable entries are a ValidationError."""
        data = {"ambient": {"blocks": [{"orthonormal": 1}]}, "generators": [["x/y"]]}
        with pytest.raises(ValidationError):
            HermitianLattice.from_file(data)

    def test_rejects_empty(self):
        """Test that a file without generators is rejected."""
        with pytest.raises(ValidationError):
            HermitianLattice.from_file({"ambient": {"blocks": [{"orthonormal": 1}]}, "generators": []})

    def test_fraction_entries(self):
        """Test that rational entries survive the codec."""
        L = HermitianLattice(AmbientSpace.standard(1, 3), [[EisRat(1, 3)]])
        assert HermitianLattice.from_file(L.to_file()).basis == [[EisRat(1, 3)]]
