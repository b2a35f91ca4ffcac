"""
Tests for short vector enumeration, minima and theta coefficients.
"""

import random
from collections import Counter
from itertools import product

import pytest
from hypothesis import HealthCheck, given, settings

from eisenlat.models.eisenstein import EisInt
from eisenlat.models.lattice import HermitianLattice, contains, orthogonal_sum
from eisenlat.services.enumerate import (
    fincke_pohst,
    fincke_pohst_parallel,
    hermitian_products,
    iter_vectors,
    minimum,
    mu2,
    orbit_representatives,
    random_vectors,
    short_vectors,
    theta_coeffs,
    vectors_of_norm,
)
from eisenlat.services.modforms import theta_a2
from eisenlat.services.standard import lattice_u6, standard
from tests.conftest import sublattices_of_in

# Z[w] elements of norm <= 3: zero, the six units, the six associates of sqrt-3
SMALL = [EisInt(a, b) for a in range(-2, 3) for b in range(-2, 3) if EisInt(a, b).norm() <= 3]


def brute_force_counts(L: HermitianLattice, bound: int) -> dict[int, int]:
    """Norm counts of lattice vectors inside I_n with every coordinate of norm <= bound."""
    counts: Counter = Counter()
    for x in product(SMALL, repeat=L.dim):
        n = sum(z.norm() for z in x)
        if 0 < n <= bound and contains(L, x):
            counts[n] += 1
    return dict(sorted(counts.items()))


class TestFinckePohst:
    """Tests for the integer enumeration kernel."""

    def test_one_dimensional(self):
        """Test x*2*x <= 8 gives +-1 and +-2."""
        out = fincke_pohst([[2]], 8)
        assert sorted(x for (x,), _ in out) == [-2, -1, 1, 2]
        assert {n for _, n in out} == {2, 8}

    def test_zero_bound(self):
        """Test that a non-positive bound yields nothing."""
        assert fincke_pohst([[2, -1], [-1, 2]], 0) == []

    def test_a2_shell(self):
        """Test that the hexagonal lattice has six vectors of trace norm 2."""
        out = fincke_pohst([[2, -1], [-1, 2]], 2)
        assert len(out) == 6

    def test_first_stops_early(self):
        """Test that `first` truncates the search."""
        out = fincke_pohst([[2, -1], [-1, 2]], 20, rng=random.Random(1), first=3)
        assert len(out) == 3
        assert all(n <= 20 for _, n in out)

    def test_parallel_matches_serial(self):
        """Test that splitting the top coordinate over workers finds the same vectors."""
        from eisenlat.models.lattice import trace_lattice

        T = trace_lattice(standard("E_6"))
        serial = fincke_pohst_parallel(T, 4, 1)
        parallel = fincke_pohst_parallel(T, 4, 2)
        assert serial == parallel


class TestShortVectors:
    """Tests for Hermitian short vector reports."""

    @given(sublattices_of_in())
    @settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_oracle_equivalence(self, L):
        """Test enumeration against a brute-force search of the ambient box."""
        assert short_vectors(L, 3).counts_by_norm == brute_force_counts(L, 3)

    @pytest.mark.parametrize("name,m", [("I1", 1), ("A_2", 2), ("U6", 2), ("E_8", 2), ("U5", 2)])
    def test_minimum(self, name, m):
        """Test the minimum of standard lattices."""
        assert minimum(standard(name)) == m

    def test_minimum_enumerates_once(self):
        """Test that the minimum comes from a single enumeration up to the shortest reduced basis vector."""
        L = lattice_u6()
        assert minimum(L) == 2
        bounds = [k for k in L.__dict__["_short_vector_cache"] if isinstance(k, int)]
        assert len(bounds) == 1

    def test_root_counts_fixture(self, fixture_json):
        """Test mu2 of every lattice in the root-count fixture."""
        for name, count in fixture_json("root_counts.json")["counts"].items():
            assert mu2(standard(name)) == count, name

    def test_orbit_representatives(self, u6):
        """Test that norm-2 vectors of U6 fall into 756 / 6 unit orbits."""
        assert len(orbit_representatives(vectors_of_norm(u6, 2))) == 126

    def test_theta_a2_matches_enumeration(self):
        """Test the divisor formula for the theta series of Z[w] up to q^50."""
        assert theta_coeffs(standard("I1"), 50) == theta_a2(50).to_list()

    def test_vectors_are_in_lattice(self, u6):
        """Test that enumerated coordinates give vectors of the reported norm."""
        for c, n in short_vectors(u6, 2).vectors[:50]:
            v = u6.vector(c)
            assert u6.ambient.norm(v) == n

    def test_cache_reuses_larger_bound(self, a2):
        """Test that a smaller bound is served from a cached larger one."""
        big = short_vectors(a2, 6)
        small = short_vectors(a2, 2)
        assert small.vectors == [p for p in big.vectors if p[1] <= 2]

    def test_orthogonal_sum_theta(self):
        """Test that theta coefficients of I1 + I1 are the square of theta_a2."""
        L = orthogonal_sum(standard("I1"), standard("I1"))
        assert theta_coeffs(L, 6) == (theta_a2(6) ** 2).to_list()


class TestRandomVectors:
    """Tests for seeded random enumeration order."""

    def test_same_seed_same_order(self, u6):
        """Test that equal seeds give identical sequences."""
        a = [c for c, _ in zip(random_vectors(u6, 4, random.Random(7)), range(30))]
        b = [c for c, _ in zip(random_vectors(u6, 4, random.Random(7)), range(30))]
        assert a == b

    def test_norms_within_bound(self, u6):
        """Test that every yielded vector respects the bound."""
        for (c, n), _ in zip(random_vectors(u6, 4, random.Random(3)), range(100)):
            assert 0 < n <= 4
            assert u6.ambient.norm(u6.vector(c)) == n


class TestHermitianProducts:
    """Tests for batched Hermitian products through the trace form."""

    def test_matches_inner(self, u6):
        """Test (A_i, B_j) = alpha_ij + beta_ij w against the ambient product."""
        vecs = [c for c, _ in short_vectors(u6, 3).vectors[:12]]
        alpha, beta = hermitian_products(u6, vecs, vecs)
        for i, x in enumerate(vecs):
            for j, y in enumerate(vecs):
                h = u6.inner(u6.vector(x), u6.vector(y)).to_eisint()
                assert (int(alpha[i][j]), int(beta[i][j])) == (h.a, h.b)


class TestIterVectors:
    """Tests for lazy enumeration."""

    def test_same_vectors_as_short_vectors(self, a2):
        """Test that the lazy walk yields exactly the enumerated vectors."""
        def keyed(pairs):
            return sorted((tuple(z.key() for z in c), n) for c, n in pairs if n)

        assert keyed(iter_vectors(a2, 6)) == keyed(short_vectors(a2, 6).vectors)

    def test_can_stop_early(self, u6):
        """Test that taking a prefix does not need the full enumeration."""
        first = next(iter_vectors(u6, 8))
        assert 0 < first[1] <= 8
