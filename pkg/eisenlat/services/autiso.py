"""
eisenlat - Automorphisms and isometries
Backtrack search in the Hermitian picture: a map is fixed by the images of
an LLL-reduced basis v_1..v_n, and the image of v_k must have the norm of
v_k and the same products with the images already chosen. The next base
vector to place is always the one with the fewest remaining candidates.

The group order comes from a stabilizer chain: working from the last base
vector to the first, the orbit of v_i under the automorphisms fixing
v_1..v_{i-1} is closed under the generators found so far, and every
candidate outside it is either reached by a new generator or proven
unreachable together with its whole orbit.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Any, Sequence

import numpy as np

from eisenlat.core.config import settings
from eisenlat.core.exceptions import BudgetExceeded, Indeterminate, ValidationError
from eisenlat.models import matrix as mx
from eisenlat.models.eisenstein import OMEGA, EisInt, EisRat
from eisenlat.models.lattice import HermitianLattice, coords_to_trace, trace_lattice
from eisenlat.services.enumerate import (
    Coords,
    minimum,
    orbit_representatives,
    short_vectors,
    theta_coeffs,
    unit_representative,
    vectors_of_norm,
)
from eisenlat.services.reduction import lll_hermitian

logger = logging.getLogger(__name__)

IntMatrix = list[list[EisInt]]

# product arrays kept per chosen vector before the cache is flushed
_PRODUCT_CACHE = 4096


# ==================== results ====================


@dataclass
class IsometryWitness:
    """Rows are the images of the source basis in coordinates of the target basis."""

    matrix: IntMatrix

    def to_list(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.matrix]


@dataclass
class AutGroupReport:
    generators: list[IsometryWitness] = field(default_factory=list)
    order: int = 0
    orbit_lengths: list[int] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        from eisenlat.services.catalog import format_order

        return {
            "order": str(self.order),
            "order_factored": format_order(self.order),
            "orbit_lengths": self.orbit_lengths,
            "generators": [g.to_list() for g in self.generators],
        }


def is_automorphism(L: HermitianLattice, M: Sequence[Sequence[EisInt | EisRat]]) -> bool:
    """True when M (acting on coordinate rows) preserves the Gram of L over Z[w]."""
    return is_isometry(L, L, M)


def is_isometry(L1: HermitianLattice, L2: HermitianLattice, M: Sequence[Sequence[EisInt | EisRat]]) -> bool:
    """True when M maps L1 onto L2: M * G2 * M^* = G1 with M invertible over Z[w]."""
    rows = mx.to_rat(M)
    if len(rows) != L1.rank or any(len(r) != L2.rank for r in rows):
        return False
    if not mx.is_integral_matrix(rows):
        return False
    if mx.mat_mul(mx.mat_mul(rows, L2.gram), mx.conj_transpose(rows)) != L1.gram:
        return False
    return mx.det(rows).norm() == 1


# ==================== search machinery ====================


class _Clock:
    def __init__(self, budget: float | None) -> None:
        self.budget = settings.aut_budget if budget is None else budget
        self.started = time.monotonic()
        self.nodes = 0

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes % 256 == 0 and self.elapsed > self.budget:
            raise BudgetExceeded(f"search budget of {self.budget:.0f}s exhausted", self.elapsed)


@dataclass
class _Base:
    """LLL-reduced base of a lattice, most constrained vector first."""

    V: IntMatrix          # rows in coordinates of L's basis
    gram: IntMatrix       # Gram of the rows of V
    V_inv: mx.RatMatrix

    @classmethod
    def of(cls, L: HermitianLattice) -> "_Base":
        U, G = lll_hermitian(L.gram)
        order = sorted(range(L.rank), key=lambda i: (G[i][i].to_fraction(), i))
        return cls._ordered(U, G, order)

    @classmethod
    def _ordered(cls, U: Sequence[Sequence[Any]], G: Sequence[Sequence[Any]], order: Sequence[int]) -> "_Base":
        V = [[_as_eisint(x) for x in U[i]] for i in order]
        gram = [[_as_eisint(G[i][j]) for j in order] for i in order]
        return cls(V, gram, mx.inverse(mx.to_rat(V)))

    @property
    def norms(self) -> list[int]:
        return [self.gram[i][i].a for i in range(len(self.gram))]

    def constrained_first(self, table: "_VectorTable") -> "_Base":
        """Reorder greedily so each vector has the fewest images given the ones before it."""
        images = [table.index[tuple(v)] for v in self.V]
        masks = {k: table.norm == self.norms[k] for k in range(len(self.V))}
        order: list[int] = []
        while masks:
            k = min(masks, key=lambda j: (int(masks[j].sum()), j))
            del masks[k]
            order.append(k)
            alpha, beta = table.products(images[k])
            for j in masks:
                g = self.gram[j][k]
                masks[j] = masks[j] & (alpha == g.a) & (beta == g.b)
        return self._ordered(self.V, self.gram, order)


def _as_eisint(x: EisInt | EisRat) -> EisInt:
    return x.to_eisint() if isinstance(x, EisRat) else x


class _VectorTable:
    """Lattice vectors of the base norms, with vectorized Hermitian products."""

    def __init__(self, L: HermitianLattice, norms: Sequence[int]) -> None:
        wanted = set(norms)
        report = short_vectors(L, max(wanted))
        self.coords: list[Coords] = [c for c, k in report.vectors if k in wanted]
        self.norm = np.array([k for _, k in report.vectors if k in wanted], dtype=np.int64)
        self.index = {c: i for i, c in enumerate(self.coords)}
        self.n = L.rank
        X = [coords_to_trace(c) for c in self.coords]
        T = trace_lattice(L)
        x_max = max((abs(v) for r in X for v in r), default=0)
        t_max = max((abs(v) for r in T for v in r), default=0)
        safe = (x_max + 1) ** 2 * (t_max + 1) * max(4 * self.n * self.n, 1) < 2**62
        self.dtype: Any = np.int64 if safe else object
        self.X = np.array(X, dtype=self.dtype).reshape(len(X), 2 * self.n)
        self.key = {tuple(int(v) for v in row): i for i, row in enumerate(X)}
        self.P = self.X @ np.array(T, dtype=self.dtype)
        self._products: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def __len__(self) -> int:
        return len(self.coords)

    def __getstate__(self) -> dict[str, Any]:
        state = self.__dict__.copy()
        state["_products"] = {}
        return state

    def products(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(alpha, beta) with (s, S_i) = alpha_s + beta_s * w for every s in the table."""
        hit = self._products.get(i)
        if hit is not None:
            return hit
        if len(self._products) >= _PRODUCT_CACHE:
            self._products.clear()
        w = self.coords[i]
        xw = np.array(coords_to_trace(w), dtype=self.dtype)
        xow = np.array(coords_to_trace([OMEGA * z for z in w]), dtype=self.dtype)
        p1, p2 = self.P @ xw, self.P @ xow
        out = ((2 * p1 + p2) // 3, (p1 + 2 * p2) // 3)
        self._products[i] = out
        return out

    def mask(self, gram: IntMatrix, k: int, chosen: dict[int, int]) -> np.ndarray:
        """Possible images of base vector k given the images already chosen."""
        mask = self.norm == gram[k][k].a
        for j, c in chosen.items():
            alpha, beta = self.products(c)
            g = gram[k][j]
            mask &= (alpha == g.a) & (beta == g.b)
        return mask

    def candidates(self, gram: IntMatrix, chosen: Sequence[int]) -> np.ndarray:
        """Indices that may serve as the image of base vector len(chosen)."""
        return np.flatnonzero(self.mask(gram, len(chosen), dict(enumerate(chosen))))

    def permutation(self, M: IntMatrix) -> np.ndarray:
        """Action of the coordinate map x -> x*M on the table, as an index array."""
        A = _trace_action(M)
        images = self.X @ np.array(A, dtype=self.dtype)
        perm = np.empty(len(self.coords), dtype=np.int64)
        for i, row in enumerate(images):
            perm[i] = self.key[tuple(int(v) for v in row)]
        return perm


def _trace_action(M: IntMatrix) -> list[list[int]]:
    rows: list[list[int]] = []
    for r in M:
        rows.append(coords_to_trace(r))
        rows.append(coords_to_trace([OMEGA * z for z in r]))
    return rows


def _extend(table: _VectorTable, gram: IntMatrix, chosen: dict[int, int], clock: _Clock,
            first_level: np.ndarray | None = None) -> list[int] | None:
    """Depth-first completion of `chosen` (base index -> table index) to images of the whole base."""
    masks = {k: table.mask(gram, k, chosen) for k in range(len(gram)) if k not in chosen}
    if any(not m.any() for m in masks.values()):
        return None
    return _search(table, gram, dict(chosen), masks, clock, first_level)


def _most_constrained(masks: dict[int, np.ndarray]) -> int:
    return min(masks, key=lambda j: (int(masks[j].sum()), j))


def _search(table: _VectorTable, gram: IntMatrix, chosen: dict[int, int], masks: dict[int, np.ndarray],
            clock: _Clock, first_level: np.ndarray | None = None) -> list[int] | None:
    if not masks:
        return [chosen[k] for k in range(len(gram))]
    clock.tick()
    k = _most_constrained(masks)
    cands = np.flatnonzero(masks[k])
    if first_level is not None:
        cands = cands[first_level[cands]]
    return _branch(table, gram, chosen, masks, k, cands, clock)


def _branch(table: _VectorTable, gram: IntMatrix, chosen: dict[int, int], masks: dict[int, np.ndarray],
            k: int, cands: Sequence[int], clock: _Clock) -> list[int] | None:
    """Try each candidate as the image of base vector k, pruning the other masks forward."""
    for c in cands:
        c = int(c)
        alpha, beta = table.products(c)
        rest: dict[int, np.ndarray] = {}
        for j, m in masks.items():
            if j == k:
                continue
            g = gram[j][k]
            m = m & (alpha == g.a) & (beta == g.b)
            if not m.any():
                break
            rest[j] = m
        else:
            chosen[k] = c
            done = _search(table, gram, chosen, rest, clock)
            if done is not None:
                return done
            del chosen[k]
    return None


def _orbit(start: int, perms: Sequence[np.ndarray]) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for i in frontier:
            for p in perms:
                j = int(p[i])
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return seen


def _to_matrix(base: _Base, table: _VectorTable, images: Sequence[int]) -> IntMatrix:
    W = mx.to_rat([list(table.coords[i]) for i in images])
    M = mx.mat_mul(base.V_inv, W)
    return [[x.to_eisint() for x in row] for row in M]


# ==================== automorphism group ====================


def automorphism_group(L: HermitianLattice, budget: float | None = None) -> AutGroupReport:
    """Generators and exact order of the Hermitian automorphism group of L."""
    if not L.is_integral():
        raise ValidationError("automorphism group needs an integral lattice")
    n = L.rank
    if n == 0:
        return AutGroupReport([], 1, [])
    clock = _Clock(budget)
    base = _Base.of(L)
    table = _VectorTable(L, base.norms)
    base = base.constrained_first(table)
    base_idx = [table.index[tuple(v)] for v in base.V]
    identity = [[EisInt(1) if i == j else EisInt(0) for j in range(n)] for i in range(n)]

    # scalar units move v_1, so they only act on the first level
    gens: list[tuple[int, IntMatrix, np.ndarray]] = []
    for u in (-EisInt(1), OMEGA):
        M = [[u * x for x in row] for row in identity]
        gens.append((0, M, table.permutation(M)))

    orbit_lengths = [0] * n
    try:
        for i in reversed(range(n)):
            perms = [p for lvl, _, p in gens if lvl >= i]
            orbit = _orbit(base_idx[i], perms)
            failed: set[int] = set()
            prefix = base_idx[:i]
            for w in table.candidates(base.gram, prefix):
                w = int(w)
                if w in orbit or w in failed:
                    continue
                images = _extend(table, base.gram, {**dict(enumerate(prefix)), i: w}, clock)
                if images is None:
                    failed |= _orbit(w, perms)
                    continue
                gen = _to_matrix(base, table, images)
                perm = table.permutation(gen)
                gens.append((i, gen, perm))
                perms.append(perm)
                orbit = _orbit(base_idx[i], perms)
            orbit_lengths[i] = len(orbit)
            logger.debug(f"level {i}: orbit {len(orbit)}, {len(gens)} generators")
    except BudgetExceeded as e:
        partial = {
            "generators": [[[str(x) for x in row] for row in M] for _, M, _ in gens],
            "orbit_lengths": orbit_lengths,
        }
        raise BudgetExceeded(str(e), clock.elapsed, partial) from e

    order = prod(orbit_lengths)
    if order % 6:
        raise ValidationError(f"group order {order} is not divisible by 6")
    if clock.elapsed > 5:
        logger.info(f"🔁 |G| = {order} for rank {n} in {clock.elapsed:.1f}s ({clock.nodes} nodes)")
    return AutGroupReport([IsometryWitness(M) for _, M, _ in gens], order, orbit_lengths)


def orbit(v: Sequence[EisInt], generators: Sequence[Sequence[Sequence[EisInt]]]) -> list[Coords]:
    """Orbit of a coordinate vector under matrices acting on the right."""
    start = tuple(EisInt.coerce(x) for x in v)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for M in generators:
                y = tuple(_row_times(x, M))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda c: [z.key() for z in c])


def _row_times(x: Sequence[EisInt], M: Sequence[Sequence[EisInt]]) -> list[EisInt]:
    out = [EisInt(0)] * len(M[0])
    for xi, row in zip(x, M):
        if xi:
            out = [o + xi * r for o, r in zip(out, row)]
    return out


# ==================== isometry ====================


def _root_key(L: HermitianLattice) -> list[tuple[int, int, int]]:
    from eisenlat.services.roots import root_components

    return sorted((M.rank, count, M.discriminant) for M, count in root_components(L))


def _minimal_divisors(L: HermitianLattice) -> list[EisInt]:
    """Elementary divisors of the span of the minimal vectors inside L."""
    reps = orbit_representatives(vectors_of_norm(L, minimum(L)))
    return mx.elementary_divisors(mx.hermite_form([list(c) for c in reps]))


def isometry_invariants(L: HermitianLattice, prec: int) -> tuple:
    """Invariants compared before any search: rank, discriminant, theta
    coefficients up to q^prec, root components and the glue of the minimal
    vectors. The last one separates many lattices from their conjugates."""
    return (
        L.rank,
        L.discriminant,
        tuple(theta_coeffs(L, max(prec, 2))),
        tuple(_root_key(L)),
        tuple(z.key() for z in _minimal_divisors(L)),
    )


def _isometry_worker(args: tuple) -> tuple[str, list[int] | None, int]:
    table, gram, masks, k, cands, budget = args
    clock = _Clock(budget)
    try:
        images = _branch(table, gram, {}, masks, k, cands, clock)
    except BudgetExceeded:
        return "budget", None, clock.nodes
    return ("found" if images is not None else "none"), images, clock.nodes


def _isometry_search(table: _VectorTable, gram: IntMatrix, reps: np.ndarray, clock: _Clock,
                     threads: int) -> list[int] | None:
    """Search with the first level split over worker processes.

    Chunks are contiguous in candidate order and the first chunk with a
    witness wins, so the answer does not depend on the worker count.
    """
    masks = {k: table.mask(gram, k, {}) for k in range(len(gram))}
    if any(not m.any() for m in masks.values()):
        return None
    k = _most_constrained(masks)
    cands = np.flatnonzero(masks[k])
    # a witness can be multiplied by any unit, so the first image only needs unit representatives
    cands = cands[reps[cands]]
    workers = min(threads, len(cands))
    if workers <= 1:
        return _branch(table, gram, {}, masks, k, cands, clock)
    chunks = [c for c in np.array_split(cands, workers) if len(c)]
    remaining = clock.budget - clock.elapsed
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        results = list(pool.map(_isometry_worker, [(table, gram, masks, k, c, remaining) for c in chunks]))
    clock.nodes += sum(nodes for _, _, nodes in results)
    for status, images, _ in results:
        if status == "found":
            return images
    if any(status == "budget" for status, _, _ in results):
        raise BudgetExceeded(f"search budget of {clock.budget:.0f}s exhausted", clock.elapsed)
    return None


def is_isometric(
    L1: HermitianLattice,
    L2: HermitianLattice,
    budget: float | None = None,
    threads: int | None = None,
) -> IsometryWitness | None:
    """A witness mapping L1 onto L2, or None when none exists."""
    for L in (L1, L2):
        if not L.is_integral():
            raise ValidationError("isometry test needs integral lattices")
    if L1.rank != L2.rank:
        return None
    if L1.rank == 0:
        return IsometryWitness([])
    clock = _Clock(budget)
    base = _Base.of(L1)
    bound = max(base.norms)
    if isometry_invariants(L1, bound) != isometry_invariants(L2, bound):
        return None
    base = base.constrained_first(_VectorTable(L1, base.norms))
    table = _VectorTable(L2, base.norms)
    reps = np.array([unit_representative(c) == c for c in table.coords], dtype=bool)
    try:
        images = _isometry_search(table, base.gram, reps, clock, threads or settings.threads)
    except BudgetExceeded as e:
        raise Indeterminate(f"isometry undecided: {e}", clock.elapsed) from e
    if images is None:
        return None
    M = _to_matrix(base, table, images)
    if not is_isometry(L1, L2, M):
        raise ArithmeticError("isometry search returned a map that does not preserve the form")
    return IsometryWitness(M)


# ==================== brute force ====================


def automorphism_group_bruteforce(L: HermitianLattice) -> int:
    """Count every form-preserving image of the given basis (small ranks only)."""
    if L.rank > 3:
        raise ValidationError("brute force is limited to rank <= 3")
    gram = [[g.to_eisint() for g in row] for row in L.gram]
    norms = [gram[i][i].a for i in range(L.rank)]
    vectors = [c for c, k in short_vectors(L, max(norms)).vectors]

    def inner(x: Coords, y: Coords) -> EisInt:
        acc = EisInt(0)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    acc = acc + xi * gram[i][j] * yj.conj()
        return acc

    def count(chosen: list[Coords]) -> int:
        k = len(chosen)
        if k == L.rank:
            return 1
        total = 0
        for c in vectors:
            if inner(c, c) != gram[k][k]:
                continue
            if all(inner(c, w) == gram[k][j] for j, w in enumerate(chosen)):
                total += count(chosen + [c])
        return total

    return count([])
