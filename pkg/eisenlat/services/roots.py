"""
eisenlat - Root systems
The root sublattice L^(2) (span of the norm-2 vectors) and the
identification of its irreducible components.

Components are named A_n, D_n(2), D_n(sqrt-3), E_6, E_7, E_8, U_5, U_6 and
are recognized by (rank, number of roots, discriminant). D_3(2) is A_3 and
D_2(sqrt-3) is A_2; those two names only exist as isometric aliases.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from eisenlat.core.exceptions import ValidationError
from eisenlat.models.lattice import HermitianLattice
from eisenlat.models.matrix import hermite_form
from eisenlat.services.decompose import component_lattice, graph_components
from eisenlat.services.enumerate import orbit_representatives, vectors_of_norm
from eisenlat.services.standard import MAX_RANK, standard

logger = logging.getLogger(__name__)

# canonical order of component types inside a descriptor
TYPE_ORDER = ("E", "U", "D2", "D3", "A", "unknown")

_TOKEN_RE = re.compile(
    r"(?P<unknown>unknown\((?P<ur>\d+),(?P<uc>\d+),(?P<ud>\d+)\))"
    r"|(?P<t>[ADEU])_(?P<n>\d+)(?:\^(?P<k1>\d+))?(?:\((?P<p>2|sqrt-3)\))?(?:\^(?P<k2>\d+))?"
)


# ==================== components ====================


@dataclass(frozen=True)
class RootComponent:
    """One irreducible root system; `roots` and `disc` are only set for unknown ones."""

    kind: str
    n: int
    roots: int = 0
    disc: int = 0

    def __post_init__(self) -> None:
        if self.kind not in TYPE_ORDER:
            raise ValidationError(f"unknown root system type {self.kind!r}")
        if self.kind == "E" and self.n not in (6, 7, 8):
            raise ValidationError(f"E_{self.n} is not a root system")
        if self.kind == "U" and self.n not in (5, 6):
            raise ValidationError(f"U_{self.n} is not a root system")
        if self.kind in ("D2", "D3") and self.n < 2:
            raise ValidationError(f"D_{self.n} is not a root system")
        if self.n < 1:
            raise ValidationError("root systems have positive rank")

    @property
    def rank(self) -> int:
        return self.n

    @property
    def root_count(self) -> int:
        n = self.n
        if self.kind == "A":
            return 3 * n * (n + 1)
        if self.kind == "D2":
            return 6 * n * (n - 1)
        if self.kind == "D3":
            return 9 * n * (n - 1)
        if self.kind == "E":
            return {6: 216, 7: 378, 8: 720}[n]
        if self.kind == "U":
            return {5: 270, 6: 756}[n]
        return self.roots

    @property
    def discriminant(self) -> int:
        n = self.n
        if self.kind == "A":
            return n + 1
        if self.kind == "D2":
            return 4
        if self.kind == "D3":
            return 3
        if self.kind == "E":
            return 9 - n
        if self.kind == "U":
            return 7 - n
        return self.disc

    @property
    def fingerprint(self) -> tuple[int, int, int]:
        return (self.rank, self.root_count, self.discriminant)

    @property
    def lattice_name(self) -> str:
        """Name understood by `standard`."""
        if self.kind == "D2":
            return f"D_{self.n}(2)"
        if self.kind == "D3":
            return f"D_{self.n}(sqrt-3)"
        return f"{self.kind}_{self.n}"

    def __str__(self) -> str:
        if self.kind == "unknown":
            return f"unknown({self.n},{self.roots},{self.disc})"
        return self.lattice_name

    def sort_key(self) -> tuple[int, int, int, int]:
        return (-self.n, TYPE_ORDER.index(self.kind), self.roots, self.disc)


@dataclass(frozen=True)
class RootSystemDescriptor:
    components: tuple[RootComponent, ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, components: Iterable[RootComponent]) -> "RootSystemDescriptor":
        return cls(tuple(sorted(components, key=RootComponent.sort_key)))

    @property
    def total_rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def root_count(self) -> int:
        return sum(c.root_count for c in self.components)

    @property
    def is_identified(self) -> bool:
        return all(c.kind != "unknown" for c in self.components)

    def multiset(self) -> Counter:
        return Counter(self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootSystemDescriptor):
            return NotImplemented
        return self.multiset() == other.multiset()

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        if not self.components:
            return "empty"
        parts = []
        for comp, k in _runs(self.components):
            parts.append(f"{comp}^{k}" if k > 1 else str(comp))
        return "".join(parts)


def _runs(components: tuple[RootComponent, ...]) -> list[tuple[RootComponent, int]]:
    out: list[tuple[RootComponent, int]] = []
    for c in components:
        if out and out[-1][0] == c:
            out[-1] = (c, out[-1][1] + 1)
        else:
            out.append((c, 1))
    return out


# ==================== parsing ====================


def parse_descriptor(text: str) -> tuple[RootSystemDescriptor, list[str]]:
    """Parse the table notation ("D_8(2)U_5A_1", "D_3^3(sqrt-3)", "empty").

    Returns the descriptor and a list of flags; a bare D_n is read as
    D_n(sqrt-3) and flagged "bare-D".
    """
    s = text.strip().replace(" ", "").replace("√−3", "sqrt-3").replace("√-3", "sqrt-3")
    if s in ("", "empty", "-", "∅"):
        return RootSystemDescriptor(), []
    flags: list[str] = []
    comps: list[RootComponent] = []
    pos = 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValidationError(f"cannot parse root system {text!r} at position {pos}")
        pos = m.end()
        if m.group("unknown"):
            comps.append(RootComponent("unknown", int(m.group("ur")), int(m.group("uc")), int(m.group("ud"))))
            continue
        t, n, p = m.group("t"), int(m.group("n")), m.group("p")
        if m.group("k1") and m.group("k2"):
            raise ValidationError(f"{text!r}: multiplicity given twice")
        k = int(m.group("k1") or m.group("k2") or 1)
        if t == "D":
            if p is None:
                flags.append("bare-D")
                kind = "D3"
            else:
                kind = "D2" if p == "2" else "D3"
        else:
            if p is not None:
                raise ValidationError(f"{text!r}: only D_n takes a parameter")
            kind = t
        comps.extend([RootComponent(kind, n)] * k)
    return RootSystemDescriptor.of(_normalize(comps)), flags


def _normalize(comps: list[RootComponent]) -> list[RootComponent]:
    # the isometric aliases D_3(2) = A_3 and D_2(sqrt-3) = A_2
    out = []
    for c in comps:
        if c.kind == "D2" and c.n == 3:
            c = RootComponent("A", 3)
        elif c.kind == "D3" and c.n == 2:
            c = RootComponent("A", 2)
        out.append(c)
    return out


def expected_mu2(descriptor: RootSystemDescriptor) -> int:
    return descriptor.root_count


# ==================== identification ====================


def _alphabet() -> list[RootComponent]:
    out = [RootComponent("A", n) for n in range(1, MAX_RANK + 1)]
    out += [RootComponent("D2", n) for n in range(3, MAX_RANK + 1)]
    out += [RootComponent("D3", n) for n in range(2, MAX_RANK + 1)]
    out += [RootComponent("E", k) for k in (6, 7, 8)]
    out += [RootComponent("U", 5), RootComponent("U", 6)]
    return out


@lru_cache(maxsize=None)
def _by_fingerprint() -> dict[tuple[int, int, int], tuple[RootComponent, ...]]:
    table: dict[tuple[int, int, int], list[RootComponent]] = {}
    for c in _alphabet():
        table.setdefault(c.fingerprint, []).append(c)
    # A_n first, so isometric aliases resolve to the A name
    return {k: tuple(sorted(v, key=lambda c: c.kind != "A")) for k, v in table.items()}


@lru_cache(maxsize=None)
def reference_lattice(component: RootComponent) -> HermitianLattice:
    if component.kind == "unknown":
        raise ValidationError("unknown components have no reference lattice")
    return standard(component.lattice_name)


def identify_component(M: HermitianLattice, roots: int) -> RootComponent:
    """Name an irreducible root lattice M with `roots` roots."""
    key = (M.rank, roots, int(M.discriminant))
    candidates = _by_fingerprint().get(key, ()) if M.discriminant.denominator == 1 else ()
    if len(candidates) == 1:
        return candidates[0]
    if candidates:
        from eisenlat.services.autiso import is_isometric

        for c in candidates:
            if is_isometric(M, reference_lattice(c)) is not None:
                return _normalize([c])[0]
    logger.warning(f"⚠️ Unidentified root component rank={key[0]} roots={key[1]} disc={M.discriminant}")
    return RootComponent("unknown", key[0], key[1], key[2])


def root_sublattice(L: HermitianLattice) -> HermitianLattice:
    """Z[w]-span of the norm-2 vectors of L (rank 0 when there are none)."""
    roots = vectors_of_norm(L, 2)
    if not roots:
        return HermitianLattice(L.ambient, [], name="empty", check=False)
    hnf = hermite_form([list(c) for c in orbit_representatives(roots)])
    return HermitianLattice(L.ambient, [L.vector(row) for row in hnf], check=False)


def root_components(L: HermitianLattice) -> list[tuple[HermitianLattice, int]]:
    """Irreducible components of L^(2) with their root counts."""
    reps = orbit_representatives(vectors_of_norm(L, 2))
    return [(component_lattice(L, g), 6 * len(g)) for g in graph_components(L, reps)]


def classify_roots(L: HermitianLattice) -> RootSystemDescriptor:
    if not L.is_integral():
        raise ValidationError("root classification needs an integral lattice")
    return RootSystemDescriptor.of(identify_component(M, count) for M, count in root_components(L))
