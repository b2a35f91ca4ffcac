"""
eisenlat - Orthogonal decomposition
Splits a lattice into its orthogonally indecomposable summands.

Every indecomposable vector lies in a single summand, so once some set of
them spans the lattice, the connected components of its non-orthogonality
graph are exactly the summands. Vectors are taken in increasing norm and
the search stops as soon as the span is complete.
"""

import logging
from itertools import islice
from math import gcd
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from eisenlat.core.config import settings
from eisenlat.core.exceptions import ValidationError
from eisenlat.models.lattice import HermitianLattice
from eisenlat.models.matrix import HermiteAccumulator, hermite_form
from eisenlat.services.enumerate import (
    Coords,
    _omega_rows,
    hermitian_products,
    iter_vectors,
    max_reduced_norm,
    minimum,
    short_vectors,
    trace_rows,
    unit_representative,
)

logger = logging.getLogger(__name__)

# rows per hermitian_products call; keeps each product matrix small
CHUNK = 512


def _chunks(items: Iterable, size: int) -> Iterator[list]:
    it = iter(items)
    while chunk := list(islice(it, size)):
        yield chunk


# ==================== indecomposable vectors ====================


def _filter_indecomposable(L: HermitianLattice, batch: list[tuple[Coords, int]], lattice_min: int) -> list[Coords]:
    """Drop the decomposable vectors of `batch`.

    v is decomposable iff some w with N(w) <= N(v) - min satisfies (v, w) = N(w).
    Below twice the minimum nothing decomposes.
    """
    easy = [c for c, n in batch if n < 2 * lattice_min]
    hard = [(c, n) for c, n in batch if n >= 2 * lattice_min]
    if not hard:
        return easy
    small = short_vectors(L, max(n for _, n in hard) - lattice_min).vectors
    W = [c for c, _ in small]
    w_norm = np.array([n for _, n in small], dtype=np.int64)
    alpha, beta = hermitian_products(L, [c for c, _ in hard], W)
    kept = []
    for i, (c, n) in enumerate(hard):
        hit = (beta[i] == 0) & (alpha[i] == w_norm) & (w_norm <= n - lattice_min)
        if not np.any(hit):
            kept.append(c)
    return easy + kept


def _fresh_representatives(L: HermitianLattice, bound: int, seen: set[Coords]) -> Iterator[tuple[Coords, int]]:
    # lazy: the caller stops as soon as the span is complete
    for c, n in iter_vectors(L, bound):
        r = unit_representative(c)
        if r not in seen:
            seen.add(r)
            yield r, n


# ==================== spans and components ====================


def spans_lattice(L: HermitianLattice, vectors: list[Coords]) -> bool:
    """True when the coordinate rows generate Z[w]^n."""
    if not vectors:
        return L.rank == 0
    acc = HermiteAccumulator(L.rank)
    for c in vectors:
        acc.add(c)
        if acc.is_full():
            return True
    return False


class _RationalSpan:
    """Fraction-free echelon form over Q of trace coordinate rows."""

    def __init__(self, width: int) -> None:
        self.width = width
        self.rows: dict[int, list[int]] = {}

    def is_full(self) -> bool:
        return len(self.rows) == self.width

    def _reduce(self, x: list[int]) -> list[int]:
        for col in sorted(self.rows):
            if x[col]:
                r = self.rows[col]
                x = [r[col] * a - x[col] * b for a, b in zip(x, r)]
                g = gcd(*x)
                if g > 1:
                    x = [a // g for a in x]
        return x

    def insert(self, x: list[int]) -> bool:
        """Add x; False when it was already in the span."""
        x = self._reduce(x)
        lead = next((i for i, a in enumerate(x) if a), None)
        if lead is None:
            return False
        self.rows[lead] = x
        return True


def _spanning_subset(L: HermitianLattice, vectors: Sequence[Coords]) -> list[int]:
    """Indices of a greedy Q(w)-basis of the span of `vectors`."""
    span = _RationalSpan(2 * L.rank)
    picked: list[int] = []
    for i, row in enumerate(trace_rows(vectors)):
        if span.is_full():
            break
        if span.insert(row):
            span.insert(_omega_rows([row])[0])
            picked.append(i)
    return picked


def graph_components(L: HermitianLattice, vectors: list[Coords]) -> list[list[Coords]]:
    """Connected components of the graph joining non-orthogonal vectors.

    Edges are only drawn to a basis S of the span. The spans of the true
    components are orthogonal, so each meets S in a basis of its own span
    and stays connected through it.
    """
    if not vectors:
        return []
    basis = _spanning_subset(L, vectors)
    S = [vectors[j] for j in basis]
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    for start in range(0, len(vectors), CHUNK):
        alpha, beta = hermitian_products(L, vectors[start:start + CHUNK], S)
        i, k = np.nonzero((alpha != 0) | (beta != 0))
        rows.append(i + start)
        cols.append(np.asarray(basis, dtype=np.int64)[k])
    r, c = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(len(vectors), len(vectors)))
    count, labels = connected_components(graph, directed=False)
    groups: list[list[Coords]] = [[] for _ in range(count)]
    for v, label in zip(vectors, labels):
        groups[label].append(v)
    return groups


def component_lattice(L: HermitianLattice, vectors: list[Coords], name: str | None = None) -> HermitianLattice:
    """The sublattice spanned by `vectors` (coordinates in the basis of L)."""
    hnf = hermite_form([list(c) for c in vectors])
    rows = [L.vector(row) for row in hnf]
    return HermitianLattice(L.ambient, rows, name=name, check=False)


def _component_key(M: HermitianLattice) -> tuple:
    return (-M.rank, M.discriminant, tuple(tuple(x.key() for x in row) for row in M.canonical))


# ==================== decomposition ====================


def decompose(L: HermitianLattice, retries: int | None = None) -> list[HermitianLattice]:
    """Indecomposable orthogonal summands of L, canonically ordered."""
    if L.rank == 0:
        return []
    if not L.is_integral():
        raise ValidationError("decompose needs an integral lattice")
    m = minimum(L)
    top = int(max_reduced_norm(L)) + (settings.decompose_retries if retries is None else retries)
    acc = HermiteAccumulator(L.rank)
    kept: list[Coords] = []
    seen: set[Coords] = set()
    for b in range(m, top + 1):
        for batch in _chunks(_fresh_representatives(L, b, seen), CHUNK):
            for c in _filter_indecomposable(L, batch, m):
                kept.append(c)
                acc.add(c)
                if acc.is_full():
                    return _finish(L, kept)
        logger.debug(f"decompose: {len(kept)} indecomposable vectors of norm <= {b} do not span yet")
    raise ValidationError(f"decomposition did not verify up to norm {top}")


def _finish(L: HermitianLattice, vectors: list[Coords]) -> list[HermitianLattice]:
    parts = [component_lattice(L, g) for g in graph_components(L, vectors)]
    parts.sort(key=_component_key)
    _verify(L, parts)
    return parts


def _verify(L: HermitianLattice, parts: list[HermitianLattice]) -> None:
    if sum(p.rank for p in parts) != L.rank:
        raise ValidationError("component ranks do not add up")
    d = 1
    for p in parts:
        d *= p.discriminant
    if d != L.discriminant:
        raise ValidationError(f"component discriminants multiply to {d}, expected {L.discriminant}")
    for i, p in enumerate(parts):
        for q in parts[i + 1:]:
            if any(L.inner(x, y) for x in p.basis for y in q.basis):
                raise ValidationError("components are not orthogonal")


def signature(parts: list[HermitianLattice]) -> str:
    """Compact decomposition signature such as "14" or "13+1"."""
    return "+".join(str(p.rank) for p in parts) if parts else "0"
