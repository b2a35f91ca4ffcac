"""
eisenlat - 2-neighbors
Kneser steps at the inert prime 2 and a seeded random walk that collects
isometry classes.

For x in L with x not in 2L and N(x) = 0 mod 4 the neighbor is
L' = {y in L : (y, x) = 0 mod 2} + Z[w] x/2. The step is checked after
the fact: L' must again be integral and unimodular.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from eisenlat.core.exceptions import BudgetExceeded, ValidationError
from eisenlat.models.eisenstein import EisInt, EisRat, f4_reduce
from eisenlat.models.lattice import HermitianLattice
from eisenlat.models.schemas import CatalogRow, StoreEntry, StoreFile, parse_model
from eisenlat.services.autiso import is_isometric
from eisenlat.services.catalog import match_rows
from eisenlat.services.decompose import decompose, signature
from eisenlat.services.enumerate import Coords, mu2, random_vectors, theta_coeffs
from eisenlat.services.modforms import theta_from_counts
from eisenlat.services.reduction import reduced_basis
from eisenlat.services.roots import classify_roots, parse_descriptor

logger = logging.getLogger(__name__)

THETA_PREFIX = 4
# norms tried in order when looking for an admissible vector
WALK_NORMS = (4, 8)


# ==================== one step ====================


def is_admissible(L: HermitianLattice, coords: Sequence[EisInt], norm: int | None = None) -> bool:
    """x not in 2L and N(x) = 0 mod 4."""
    if not any(f4_reduce(c) for c in coords):
        return False
    if norm is None:
        norm = L.ambient.norm(L.vector(coords))
    return norm % 4 == 0


def neighbor2(L: HermitianLattice, x: Sequence[EisInt | int]) -> HermitianLattice:
    """The 2-neighbor of a unimodular L at x (coordinates in the basis of L)."""
    if not L.is_unimodular():
        raise ValidationError("2-neighbors need a unimodular lattice")
    coords = [EisInt.coerce(c) for c in x]
    if len(coords) != L.rank:
        raise ValidationError(f"vector has {len(coords)} coordinates, lattice rank is {L.rank}")
    if not any(f4_reduce(c) for c in coords):
        raise ValidationError("x lies in 2L", [str(c) for c in coords])
    v = L.vector(coords)
    n = L.ambient.norm(v)
    if n % 4:
        raise ValidationError(f"N(x) = {n} is not divisible by 4")

    # y -> (y, x) mod 2 is onto F4; its kernel has index 4
    residues = [f4_reduce(L.inner(b, v).to_eisint()) for b in L.basis]
    pivot = next(i for i, r in enumerate(residues) if r)
    inv = residues[pivot].inverse()
    two = EisRat(2)
    gens = [[two * t for t in L.basis[pivot]]]
    for i, b in enumerate(L.basis):
        if i == pivot:
            continue
        c = (residues[i] * inv).lift()
        gens.append([s - t * c for s, t in zip(b, L.basis[pivot])])
    gens.append([t / 2 for t in v])

    N = HermitianLattice.from_generators(L.ambient, gens, name=None)
    if N.rank != L.rank or not N.is_integral() or N.discriminant != 1:
        raise ValidationError(
            f"2-neighbor check failed: rank {N.rank}, integral {N.is_integral()}, d = {N.discriminant}",
            [str(c) for c in coords],
        )
    return reduced_basis(N)


def admissible_vectors(L: HermitianLattice, norm: int, rng: random.Random, limit: int = 1) -> list[Coords]:
    """Up to `limit` admissible vectors of the given norm, in rng-shuffled enumeration order."""
    out: list[Coords] = []
    for c, k in random_vectors(L, norm, rng):
        if k == norm and is_admissible(L, c, k):
            out.append(c)
            if len(out) >= limit:
                break
    return out


# ==================== fingerprints ====================


def theta_prefix(L: HermitianLattice, prec: int = THETA_PREFIX) -> list[int]:
    """Theta coefficients up to q^prec; rank-14 unimodular lattices use the weight-14 identity past q^2."""
    if L.rank == 14 and L.is_unimodular() and prec > 2:
        head = theta_coeffs(L, 2)
        return theta_from_counts(head[1], head[2], prec).to_list()
    return theta_coeffs(L, prec)


def fingerprint(L: HermitianLattice) -> tuple[int, tuple[int, ...], str, str]:
    """(mu2, theta prefix, root system, decomposition signature); all computed from the form alone."""
    return (mu2(L), tuple(theta_prefix(L)), str(classify_roots(L)), signature(decompose(L)))


def fingerprint_key(fp: tuple[int, tuple[int, ...], str, str]) -> str:
    m, theta, roots, sig = fp
    return f"{m}|{','.join(map(str, theta))}|{roots}|{sig}"


# ==================== class store ====================


@dataclass
class StoredClass:
    lattice: HermitianLattice
    fingerprint: str
    first_step: int
    mu2: int
    root_system: str
    undecided: bool = False
    catalog_rows: list[int] = field(default_factory=list)

    def to_entry(self) -> StoreEntry:
        return StoreEntry(
            fingerprint=self.fingerprint,
            first_step=self.first_step,
            mu2=self.mu2,
            root_system=self.root_system,
            lattice=self.lattice.to_file(),
            catalog_rows=self.catalog_rows,
            undecided=self.undecided,
        )


class ClassStore:
    """Isometry classes bucketed by fingerprint; buckets are resolved by exact isometry tests."""

    def __init__(self, budget: float | None = None) -> None:
        self.budget = budget
        self.classes: list[StoredClass] = []
        self.buckets: dict[str, list[int]] = {}
        self.visits: list[int] = []
        self.seed: int | None = None
        self.terminated_early = False

    def __len__(self) -> int:
        return len(self.classes)

    def add(self, L: HermitianLattice, step: int) -> tuple[int, bool]:
        """Class index of L and whether it is new."""
        fp = fingerprint(L)
        key = fingerprint_key(fp)
        bucket = self.buckets.setdefault(key, [])
        undecided = False
        for idx in bucket:
            try:
                if is_isometric(L, self.classes[idx].lattice, budget=self.budget) is not None:
                    self.visits.append(idx)
                    return idx, False
            except BudgetExceeded:
                undecided = True
                logger.warning(f"⚠️ isometry test undecided at step {step} (bucket {key})")
        idx = len(self.classes)
        self.classes.append(StoredClass(L, key, step, fp[0], fp[2], undecided=undecided))
        bucket.append(idx)
        self.visits.append(idx)
        return idx, True

    def to_file(self) -> dict[str, Any]:
        model = StoreFile(
            seed=self.seed,
            steps=len(self.visits) - 1 if self.visits else 0,
            visits=self.visits,
            classes=[c.to_entry() for c in self.classes],
            terminated_early=self.terminated_early,
        )
        return model.model_dump(mode="json")

    @classmethod
    def from_file(cls, data: Any) -> "ClassStore":
        model = parse_model(StoreFile, data, "class store")
        store = cls()
        store.seed = model.seed
        store.visits = list(model.visits)
        store.terminated_early = model.terminated_early
        for e in model.classes:
            L = HermitianLattice.from_file(e.lattice.model_dump())
            store.buckets.setdefault(e.fingerprint, []).append(len(store.classes))
            store.classes.append(StoredClass(L, e.fingerprint, e.first_step, e.mu2, e.root_system,
                                             e.undecided, list(e.catalog_rows)))
        return store


# ==================== walk ====================


def neighbor_walk(
    L0: HermitianLattice,
    steps: int,
    seed: int,
    budget: float | None = None,
    on_step: Callable[[int, ClassStore], None] | None = None,
) -> ClassStore:
    """Seeded random walk along 2-neighbors; identical seeds give identical stores."""
    if not L0.is_unimodular():
        raise ValidationError("the walk needs a unimodular start lattice")
    rng = random.Random(seed)
    store = ClassStore(budget)
    store.seed = seed
    current = reduced_basis(L0)
    store.add(current, 0)
    logger.info(f"🚶 Walk from {L0.name or 'lattice'}: {steps} steps, seed {seed}")
    for step in range(1, steps + 1):
        x = None
        for norm in WALK_NORMS:
            found = admissible_vectors(current, norm, rng)
            if found:
                x = found[0]
                break
        if x is None:
            store.terminated_early = True
            logger.warning(f"⚠️ No admissible vector at step {step}; walk stops")
            break
        current = neighbor2(current, x)
        _, new = store.add(current, step)
        if new:
            logger.info(f"✨ step {step}: class #{len(store)} ({store.classes[-1].root_system}, mu2 {store.classes[-1].mu2})")
        if on_step is not None:
            on_step(step, store)
    return store


def match_catalog(store: ClassStore, rows: list[CatalogRow]) -> dict[int, list[int]]:
    """Catalog rows (by number) matching each stored class's rank, mu2 and root system."""
    out: dict[int, list[int]] = {}
    for i, c in enumerate(store.classes):
        desc, _ = parse_descriptor(c.root_system)
        hits = match_rows(rows, c.lattice.rank, c.mu2, desc)
        c.catalog_rows = [r.no for r in hits]
        out[i] = c.catalog_rows
    return out
