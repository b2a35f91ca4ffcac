"""
eisenlat - Short vector enumeration
Fincke-Pohst on the trace form, exact in integers: the Gram-Schmidt data is
scaled to a common denominator so every pruning test is an integer comparison.
Hermitian norm k corresponds to trace norm 2k.
"""

import logging
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterator, Sequence

import numpy as np

from eisenlat.core.config import settings
from eisenlat.core.exceptions import ValidationError
from eisenlat.models.eisenstein import EisInt, EisRat
from eisenlat.models.lattice import HermitianLattice, trace_lattice, trace_to_coords
from eisenlat.services.reduction import _gso_int, lll_hermitian, reduce_trace_basis

logger = logging.getLogger(__name__)

Coords = tuple[EisInt, ...]


# ==================== integer kernel ====================


@dataclass(frozen=True)
class _Kernel:
    """Integer-scaled Gram-Schmidt data of a Gram matrix."""

    n: int
    M: tuple[tuple[int, ...], ...]  # D * mu
    beta: tuple[int, ...]           # E * B
    D: int
    scale: int                      # E * D^2

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence[int]]) -> "_Kernel":
        G = [[int(x) for x in row] for row in gram]
        mu, B = _gso_int(G)
        n = len(G)
        D = lcm(1, *(mu[i][t].denominator for i in range(n) for t in range(i)))
        E = lcm(1, *(b.denominator for b in B))
        M = tuple(tuple(int(mu[i][t] * D) for t in range(i)) for i in range(n))
        beta = tuple(int(b * E) for b in B)
        return cls(n, M, beta, D, E * D * D)


def _range(R: int, beta: int, S: int, D: int) -> tuple[int, int]:
    # beta * (D*x + S)^2 <= R  <=>  |D*x + S| <= isqrt(R // beta)
    s = isqrt(R // beta)
    return -((S + s) // D), (s - S) // D


def fincke_pohst(
    gram: Sequence[Sequence[int]],
    bound: int,
    *,
    rng: random.Random | None = None,
    first: int | None = None,
    top_values: Sequence[int] | None = None,
) -> list[tuple[tuple[int, ...], int]]:
    """All nonzero x with x G x^T <= bound, as (x, norm) pairs.

    With `rng` the children of every node are visited in shuffled order and
    both signs are enumerated; with `first` the search stops after that many
    hits. `top_values` restricts the outermost coordinate (used to split work).
    """
    if bound <= 0:
        return []
    k = _Kernel.from_gram(gram)
    return list(_walk(k, bound, rng=rng, first=first, top_values=top_values))


def _walk(
    k: _Kernel,
    bound: int,
    *,
    rng: random.Random | None,
    first: int | None,
    top_values: Sequence[int] | None,
) -> Iterator[tuple[tuple[int, ...], int]]:
    n = k.n
    if n == 0:
        return
    halve = rng is None
    M, beta, D = k.M, k.beta, k.D
    x = [0] * n
    S = [[0] * n for _ in range(n)]
    R = [0] * n
    zero_above = [True] * n
    R[n - 1] = bound * k.scale
    iters: list[Iterator[int]] = [iter(())] * n
    found = 0

    def children(j: int) -> Iterator[int]:
        lo, hi = _range(R[j], beta[j], S[j][j], D)
        if halve and zero_above[j]:
            lo = max(lo, 0)
        if j == n - 1 and top_values is not None:
            vals = [v for v in top_values if lo <= v <= hi]
            return iter(vals)
        if rng is not None:
            vals = list(range(lo, hi + 1))
            rng.shuffle(vals)
            return iter(vals)
        return iter(range(lo, hi + 1))

    j = n - 1
    iters[j] = children(j)
    while True:
        xj = next(iters[j], None)
        if xj is None:
            j += 1
            if j == n:
                return
            continue
        v = D * xj + S[j][j]
        rem = R[j] - beta[j] * v * v
        x[j] = xj
        if j == 0:
            if zero_above[0] and xj == 0:
                continue
            norm, r = divmod(bound * k.scale - rem, k.scale)
            if r:
                raise ArithmeticError("non-integral norm in enumeration")
            yield tuple(x), norm
            if halve:
                yield tuple(-c for c in x), norm
            found += 1
            if first is not None and found >= first:
                return
            continue
        Sj, Sn, Mj = S[j], S[j - 1], M[j]
        for t in range(j):
            Sn[t] = Sj[t] + Mj[t] * xj
        R[j - 1] = rem
        zero_above[j - 1] = zero_above[j] and xj == 0
        j -= 1
        iters[j] = children(j)


def _top_range(gram: Sequence[Sequence[int]], bound: int) -> list[int]:
    k = _Kernel.from_gram(gram)
    lo, hi = _range(bound * k.scale, k.beta[-1], 0, k.D)
    return list(range(max(lo, 0), hi + 1))


def _fp_worker(args: tuple[list[list[int]], int, list[int]]) -> list[tuple[tuple[int, ...], int]]:
    gram, bound, tops = args
    return fincke_pohst(gram, bound, top_values=tops)


def fincke_pohst_parallel(gram: Sequence[Sequence[int]], bound: int, threads: int) -> list[tuple[tuple[int, ...], int]]:
    """Split the outermost coordinate over worker processes; result is sorted."""
    G = [[int(x) for x in row] for row in gram]
    if threads <= 1 or len(G) < 2:
        out = fincke_pohst(G, bound)
    else:
        tops = _top_range(G, bound)
        chunks = [tops[i::threads] for i in range(threads) if tops[i::threads]]
        out = []
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            for part in pool.map(_fp_worker, [(G, bound, c) for c in chunks]):
                out.extend(part)
    out.sort(key=lambda p: (p[1], p[0]))
    return out


# ==================== Hermitian view ====================


@dataclass
class ShortVectorReport:
    """All lattice vectors of Hermitian norm <= bound (zero excluded)."""

    bound: int
    vectors: list[tuple[Coords, int]] = field(default_factory=list)

    @property
    def counts_by_norm(self) -> dict[int, int]:
        return dict(sorted(Counter(n for _, n in self.vectors).items()))

    def of_norm(self, k: int) -> list[Coords]:
        return [c for c, n in self.vectors if n == k]

    def upto(self, bound: int) -> "ShortVectorReport":
        return ShortVectorReport(bound, [p for p in self.vectors if p[1] <= bound])

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "counts_by_norm": {str(k): v for k, v in self.counts_by_norm.items()},
        }


def _coord_key(c: Coords) -> tuple[int, ...]:
    return tuple(v for z in c for v in (z.a, z.b))


def _apply_transform(Y: list[tuple[int, ...]], U: list[list[int]]) -> np.ndarray:
    """Rows of Y times U, in int64 when safe and in Python ints otherwise."""
    if not Y:
        return np.zeros((0, len(U)), dtype=np.int64)
    u_max = max(abs(v) for row in U for v in row)
    y_max = max(abs(v) for row in Y for v in row)
    dtype = np.int64 if u_max * y_max * len(U) < 2**62 else object
    return np.array(Y, dtype=dtype) @ np.array(U, dtype=dtype)


def _cache(L: HermitianLattice) -> dict:
    return L.__dict__.setdefault("_short_vector_cache", {})


def _reduced_trace(L: HermitianLattice) -> tuple[list[list[int]], list[list[int]]]:
    cache = _cache(L)
    if "reduced_trace" not in cache:
        cache["reduced_trace"] = reduce_trace_basis(trace_lattice(L))
    return cache["reduced_trace"]


def short_vectors(L: HermitianLattice, bound: int, threads: int | None = None) -> ShortVectorReport:
    """Every vector of Hermitian norm <= bound, sorted by coordinates."""
    if bound <= 0:
        return ShortVectorReport(max(bound, 0))
    cache = _cache(L)
    best = max((b for b in cache if isinstance(b, int) and b >= bound), default=None)
    if best is not None:
        return cache[best] if best == bound else cache[best].upto(bound)
    if not L.is_integral():
        raise ValidationError("short vector enumeration needs an integral lattice")

    started = time.monotonic()
    U, T_red = _reduced_trace(L)
    pairs = fincke_pohst_parallel(T_red, 2 * bound, threads or settings.threads)
    X = _apply_transform([p[0] for p in pairs], U)
    vectors: list[tuple[Coords, int]] = []
    for row, (_, tnorm) in zip(X, pairs):
        coords = tuple(trace_to_coords([int(v) for v in row]))
        vectors.append((coords, tnorm // 2))
    vectors.sort(key=lambda p: _coord_key(p[0]))
    report = ShortVectorReport(bound, vectors)
    cache[bound] = report
    elapsed = time.monotonic() - started
    if elapsed > 5:
        logger.info(f"🔎 Enumerated {len(vectors)} vectors of norm <= {bound} in rank {L.rank} ({elapsed:.1f}s)")
    return report


def iter_vectors(
    L: HermitianLattice, bound: int, rng: random.Random | None = None
) -> Iterator[tuple[Coords, int]]:
    """Lazily yield vectors of norm <= bound, in enumeration order or shuffled by `rng`."""
    if bound <= 0:
        return
    if not L.is_integral():
        raise ValidationError("short vector enumeration needs an integral lattice")
    U, T_red = _reduced_trace(L)
    kernel = _Kernel.from_gram(T_red)
    for y, tnorm in _walk(kernel, 2 * bound, rng=rng, first=None, top_values=None):
        row = _apply_transform([y], U)[0]
        yield tuple(trace_to_coords([int(v) for v in row])), tnorm // 2


def random_vectors(L: HermitianLattice, bound: int, rng: random.Random) -> Iterator[tuple[Coords, int]]:
    """Lazily yield vectors of norm <= bound in an order shuffled by `rng`."""
    return iter_vectors(L, bound, rng=rng)


def vectors_of_norm(L: HermitianLattice, k: int) -> list[Coords]:
    return short_vectors(L, k).of_norm(k)


def minimum(L: HermitianLattice) -> int:
    """Least nonzero Hermitian norm."""
    if L.rank == 0:
        raise ValidationError("the zero lattice has no minimum")
    if not L.is_integral():
        raise ValidationError("short vector enumeration needs an integral lattice")
    _, T_red = _reduced_trace(L)
    # a reduced basis vector of trace norm 2k is a lattice vector of norm k
    report = short_vectors(L, min(T_red[i][i] for i in range(len(T_red))) // 2)
    return min(n for _, n in report.vectors)


def mu2(L: HermitianLattice) -> int:
    return short_vectors(L, 2).counts_by_norm.get(2, 0)


def theta_coeffs(L: HermitianLattice, prec: int) -> list[int]:
    """N_0..N_prec with N_k = #{x in L : N(x) = k}."""
    counts = short_vectors(L, prec).counts_by_norm if prec > 0 else {}
    return [1] + [counts.get(k, 0) for k in range(1, prec + 1)]


def ambient_vector(L: HermitianLattice, coords: Coords) -> list[EisRat]:
    return L.vector(coords)


def max_reduced_norm(L: HermitianLattice) -> Fraction:
    """Largest basis norm after Hermitian LLL."""
    _, G = lll_hermitian(L.gram)
    return max(G[i][i].to_fraction() for i in range(len(G)))


# ==================== products of enumerated vectors ====================


def trace_rows(vectors: Sequence[Coords]) -> list[list[int]]:
    return [[v for z in c for v in (z.a, z.b)] for c in vectors]


def _omega_rows(rows: list[list[int]]) -> list[list[int]]:
    # w * (a + b*w) = -b + (a - b)*w
    out = []
    for r in rows:
        out.append([v for a, b in zip(r[0::2], r[1::2]) for v in (-b, a - b)])
    return out


def _int_array(rows: list[list[int]], limit: int) -> np.ndarray:
    m = max((abs(v) for r in rows for v in r), default=0)
    return np.array(rows, dtype=np.int64 if m < limit else object)


def hermitian_products(
    L: HermitianLattice,
    A: Sequence[Coords],
    B: Sequence[Coords],
) -> tuple[np.ndarray, np.ndarray]:
    """Matrices (alpha, beta) with (A_i, B_j) = alpha_ij + beta_ij * w."""
    cache = _cache(L)
    if "trace_gram" not in cache:
        cache["trace_gram"] = np.array(trace_lattice(L), dtype=object)
    T = cache["trace_gram"]
    XA, XB = trace_rows(A), trace_rows(B)
    XW = _omega_rows(XB)
    t_max = max((abs(int(v)) for v in T.flat), default=0) + 1
    dim = max(T.shape[0], 1)
    # products stay below 2^62 when every factor is below this limit
    limit = int((2**62 // (t_max * dim * dim)) ** 0.5) or 1
    XA_, XB_, XW_ = _int_array(XA, limit), _int_array(XB, limit), _int_array(XW, limit)
    if XA_.dtype == object or XB_.dtype == object or XW_.dtype == object:
        T_ = T
        XA_, XB_, XW_ = (np.array(x, dtype=object) for x in (XA, XB, XW))
    else:
        T_ = T.astype(np.int64)
    if not A or not B:
        z = np.zeros((len(A), len(B)), dtype=np.int64)
        return z, z.copy()
    left = XA_ @ T_
    p1 = left @ XB_.T
    p2 = left @ XW_.T
    return (2 * p1 + p2) // 3, (p1 + 2 * p2) // 3


def unit_representative(c: Coords) -> Coords:
    """The unit multiple of c whose first nonzero coordinate is a canonical associate."""
    for z in c:
        if z:
            _, u = z.canonical_associate()
            return tuple(u * w for w in c)
    return c


def orbit_representatives(vectors: Sequence[Coords]) -> list[Coords]:
    """One vector per orbit of the six units, in first-seen order."""
    seen: set[Coords] = set()
    out: list[Coords] = []
    for c in vectors:
        r = unit_representative(c)
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out
