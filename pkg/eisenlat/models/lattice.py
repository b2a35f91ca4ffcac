"""
eisenlat - Hermitian lattices
Ambient spaces, lattices given by generator rows, Gram matrices, duals,
discriminants, the trace form and module-level comparisons.

Hermitian products are linear in the first argument:
(x, y) = form_scale * sum(w_i * x_i * conj(y_i)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence, Union

from eisenlat.core.exceptions import NotContainedError, RankError, ValidationError
from eisenlat.models import matrix as mx
from eisenlat.models.eisenstein import OMEGA, EisInt, EisRat
from eisenlat.models.schemas import AmbientFile, BlockFile, LatticeFile, parse_model

Vector = list[EisRat]


# ==================== ambient space ====================


@dataclass(frozen=True)
class OrthonormalBlock:
    dim: int

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValidationError(f"block dimension must be positive, got {self.dim}")


@dataclass(frozen=True)
class Line:
    """A one-dimensional block spanned by x with (x, x) = norm."""

    norm: Fraction

    def __post_init__(self) -> None:
        if self.norm <= 0:
            raise ValidationError(f"line norm must be positive, got {self.norm}")

    @property
    def dim(self) -> int:
        return 1


Block = Union[OrthonormalBlock, Line]


@dataclass(frozen=True)
class AmbientSpace:
    blocks: tuple[Block, ...]
    form_scale: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.form_scale <= 0:
            raise ValidationError(f"form scale must be positive, got {self.form_scale}")

    @classmethod
    def standard(cls, n: int, form_scale: Fraction | int = 1) -> AmbientSpace:
        return cls((OrthonormalBlock(n),), Fraction(form_scale))

    @cached_property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    @cached_property
    def weights(self) -> tuple[EisRat, ...]:
        """Per-coordinate weight, form scale included."""
        out: list[EisRat] = []
        for b in self.blocks:
            w = self.form_scale * (b.norm if isinstance(b, Line) else 1)
            out.extend([EisRat.coerce(Fraction(w))] * b.dim)
        return tuple(out)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """Start coordinate of each block."""
        out, pos = [], 0
        for b in self.blocks:
            out.append(pos)
            pos += b.dim
        return tuple(out)

    def inner(self, x: Sequence[EisRat], y: Sequence[EisRat]) -> EisRat:
        acc = EisRat(0)
        for w, a, b in zip(self.weights, x, y):
            if a and b:
                acc = acc + w * a * b.conj()
        return acc

    def norm(self, x: Sequence[EisRat]) -> Fraction:
        return self.inner(x, x).to_fraction()

    def embed(self, block: int, vector: Sequence[EisRat]) -> Vector:
        """Place `vector` in block `block`, zero elsewhere."""
        b = self.blocks[block]
        if len(vector) != b.dim:
            raise RankError(f"block {block} has dimension {b.dim}, got a vector of length {len(vector)}")
        out = [EisRat(0)] * self.dim
        start = self.offsets[block]
        out[start:start + b.dim] = [EisRat.coerce(x) for x in vector]
        return out

    def rescaled_blocks(self, target_scale: Fraction) -> tuple[Block, ...]:
        """Blocks describing the same form when the global scale is `target_scale`."""
        r = self.form_scale / target_scale
        if r == 1:
            return self.blocks
        out: list[Block] = []
        for b in self.blocks:
            if isinstance(b, Line):
                out.append(Line(b.norm * r))
            else:
                out.extend(Line(r) for _ in range(b.dim))
        return tuple(out)

    def concat(self, other: AmbientSpace) -> AmbientSpace:
        return AmbientSpace(self.blocks + other.rescaled_blocks(self.form_scale), self.form_scale)

    # ---------- file codec ----------

    def to_file(self) -> dict[str, Any]:
        blocks: list[dict[str, Any]] = []
        for b in self.blocks:
            if isinstance(b, Line):
                blocks.append({"line": _frac_text(b.norm)})
            else:
                blocks.append({"orthonormal": b.dim})
        return {"blocks": blocks, "form_scale": _frac_text(self.form_scale)}

    @classmethod
    def from_model(cls, model: AmbientFile) -> AmbientSpace:
        blocks: list[Block] = []
        for b in model.blocks:
            blocks.append(_block_from_model(b))
        return cls(tuple(blocks), EisRat.parse(model.form_scale).to_fraction())


def _block_from_model(b: BlockFile) -> Block:
    if b.line is not None:
        return Line(EisRat.parse(b.line).to_fraction())
    assert b.orthonormal is not None
    return OrthonormalBlock(b.orthonormal)


def _frac_text(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


# ==================== lattices ====================


class HermitianLattice:
    """A full-rank Z[w]-module in an ambient space, stored by a basis.

    The constructor takes independent rows; `from_generators` accepts any
    generating set and reduces it to the canonical (Hermite) basis.
    """

    def __init__(
        self,
        ambient: AmbientSpace,
        basis: Sequence[Sequence[EisRat | EisInt | int | str]],
        name: str | None = None,
        check: bool = True,
    ) -> None:
        rows = [[EisRat.coerce(x) for x in row] for row in basis]
        for row in rows:
            if len(row) != ambient.dim:
                raise RankError(f"row of length {len(row)} in an ambient of dimension {ambient.dim}")
        if check and mx.rank(rows) != len(rows):
            raise RankError(f"{len(rows)} generator rows are not independent; use from_generators")
        self.ambient = ambient
        self.basis: list[Vector] = rows
        self.name = name

    @classmethod
    def from_generators(
        cls,
        ambient: AmbientSpace,
        generators: Sequence[Sequence[EisRat | EisInt | int | str]],
        name: str | None = None,
    ) -> HermitianLattice:
        rows = [[EisRat.coerce(x) for x in row] for row in generators]
        for row in rows:
            if len(row) != ambient.dim:
                raise RankError(f"row of length {len(row)} in an ambient of dimension {ambient.dim}")
        return cls(ambient, mx.rational_hermite_form(rows), name=name, check=False)

    @classmethod
    def standard(cls, n: int, name: str | None = None) -> HermitianLattice:
        """I_n."""
        return cls(AmbientSpace.standard(n), mx.identity(n), name=name or f"I_{n}", check=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return self.ambient.dim

    def __repr__(self) -> str:
        label = self.name or "lattice"
        return f"<HermitianLattice {label} rank={self.rank} dim={self.dim}>"

    # ---------- cached invariants ----------

    @cached_property
    def gram(self) -> mx.RatMatrix:
        n = self.rank
        g: mx.RatMatrix = [[EisRat(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                h = self.ambient.inner(self.basis[i], self.basis[j])
                g[i][j] = h
                g[j][i] = h.conj()
        return g

    @cached_property
    def discriminant(self) -> Fraction:
        d = mx.det(self.gram)
        if not d.is_real():
            raise ValidationError(f"Gram determinant {d} is not real")
        value = d.to_fraction()
        if value <= 0:
            raise ValidationError(f"Gram determinant {value} is not positive")
        return value

    @cached_property
    def canonical(self) -> tuple[tuple[EisRat, ...], ...]:
        return tuple(tuple(row) for row in mx.rational_hermite_form(self.basis))

    def is_integral(self) -> bool:
        return mx.is_integral_matrix(self.gram)

    def is_unimodular(self) -> bool:
        return self.is_integral() and self.discriminant == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermitianLattice):
            return NotImplemented
        return self.ambient == other.ambient and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash((self.ambient, self.canonical))

    # ---------- vectors ----------

    def vector(self, coords: Sequence[EisInt | EisRat | int]) -> Vector:
        """Ambient vector with the given coordinates in the basis."""
        return mx.vec_mat([EisRat.coerce(c) for c in coords], self.basis)

    def coordinates(self, v: Sequence[EisRat]) -> list[EisRat] | None:
        """Q(w)-coordinates of v in the basis, or None outside the span."""
        return mx.solve_left(self.basis, [EisRat.coerce(x) for x in v])

    def inner(self, x: Sequence[EisRat], y: Sequence[EisRat]) -> EisRat:
        return self.ambient.inner(x, y)

    def with_basis(self, basis: Sequence[Sequence[EisRat]], name: str | None = None) -> HermitianLattice:
        return HermitianLattice(self.ambient, basis, name=name if name is not None else self.name, check=False)

    # ---------- file codec ----------

    def to_file(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "ambient": self.ambient.to_file(),
            "generators": [[str(x) for x in row] for row in self.basis],
        }
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_file(cls, data: Any) -> HermitianLattice:
        model = parse_model(LatticeFile, data, "lattice file")
        ambient = AmbientSpace.from_model(model.ambient)
        rows = [[EisRat.parse(x) for x in row] for row in model.generators]
        if not rows:
            raise ValidationError("lattice file has no generators")
        if mx.rank(rows) == len(rows):
            return cls(ambient, rows, name=model.name, check=False)
        return cls.from_generators(ambient, rows, name=model.name)


# ==================== lattice-core operations ====================


def gram(L: HermitianLattice) -> mx.RatMatrix:
    return L.gram


def discriminant(L: HermitianLattice) -> Fraction:
    return L.discriminant


def rank(L: HermitianLattice) -> int:
    return L.rank


def is_integral(L: HermitianLattice) -> bool:
    return L.is_integral()


def is_unimodular(L: HermitianLattice) -> bool:
    return L.is_unimodular()


def canonical_basis(L: HermitianLattice) -> HermitianLattice:
    return L.with_basis([list(row) for row in L.canonical])


def dual(L: HermitianLattice) -> HermitianLattice:
    """L# = {x : (x, L) in Z[w]}, with basis G^-1 * B."""
    g_inv = mx.inverse(L.gram)
    rows = mx.mat_mul(g_inv, L.basis)
    return canonical_basis(L.with_basis(rows, name=f"{L.name}#" if L.name else None))


def conjugate(L: HermitianLattice) -> HermitianLattice:
    """Complex conjugate lattice: every coordinate conjugated."""
    rows = [[x.conj() for x in row] for row in L.basis]
    name = f"conj({L.name})" if L.name else None
    return canonical_basis(L.with_basis(rows, name=name))


def lattice_sum(L1: HermitianLattice, L2: HermitianLattice) -> HermitianLattice:
    if L1.ambient != L2.ambient:
        raise RankError("lattices live in different ambient spaces")
    return HermitianLattice.from_generators(L1.ambient, L1.basis + L2.basis, name=L1.name)


def transition_matrix(Lsub: HermitianLattice, Lsup: HermitianLattice) -> mx.RatMatrix:
    """T with Lsub.basis = T * Lsup.basis; raises if Lsub is not inside Lsup."""
    if Lsub.ambient != Lsup.ambient:
        raise RankError("lattices live in different ambient spaces")
    rows = []
    for i, b in enumerate(Lsub.basis):
        c = Lsup.coordinates(b)
        if c is None or not all(x.is_integral() for x in c):
            raise NotContainedError(f"basis vector {i} of the sublattice is not in the superlattice", [i])
        rows.append(c)
    return rows


def index(Lsub: HermitianLattice, Lsup: HermitianLattice) -> int:
    """Group order |Lsup / Lsub| = N(det T)."""
    if Lsub.rank != Lsup.rank:
        raise RankError(f"index needs equal ranks, got {Lsub.rank} and {Lsup.rank}")
    t = transition_matrix(Lsub, Lsup)
    return mx.det(t).norm().numerator


def contains(L: HermitianLattice, v: Sequence[EisRat]) -> bool:
    return coordinates_in_basis(L, v) is not None


def coordinates_in_basis(L: HermitianLattice, v: Sequence[EisRat | EisInt | int]) -> list[EisInt] | None:
    c = L.coordinates([EisRat.coerce(x) for x in v])
    if c is None or not all(x.is_integral() for x in c):
        return None
    return [x.to_eisint() for x in c]


def orthogonal_sum(L1: HermitianLattice, L2: HermitianLattice, name: str | None = None) -> HermitianLattice:
    """Block-diagonal sum; the second ambient is rescaled to the first form scale."""
    ambient = L1.ambient.concat(L2.ambient)
    zeros1 = [EisRat(0)] * L1.dim
    zeros2 = [EisRat(0)] * L2.dim
    rows = [row + zeros2 for row in L1.basis] + [zeros1 + row for row in L2.basis]
    return HermitianLattice(ambient, rows, name=name, check=False)


# ==================== trace form ====================


def trace_lattice(L: HermitianLattice) -> list[list[int]]:
    """Integer Gram of Tr(h) on the Z-basis b_1, w*b_1, ..., b_n, w*b_n."""
    if not L.is_integral():
        raise ValidationError("trace lattice needs an integral lattice")
    units = (EisInt(1), OMEGA)
    n = L.rank
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            g = L.gram[i][j].to_eisint()
            for s in range(2):
                for t in range(2):
                    # (w^s b_i, w^t b_j) = w^s * conj(w^t) * G_ij
                    out[2 * i + s][2 * j + t] = (units[s] * units[t].conj() * g).trace()
    return out


def trace_to_coords(x: Sequence[int]) -> list[EisInt]:
    """Z-coordinates on {b_i, w*b_i} to Z[w]-coordinates on {b_i}."""
    return [EisInt(x[2 * i], x[2 * i + 1]) for i in range(len(x) // 2)]


def coords_to_trace(c: Sequence[EisInt]) -> list[int]:
    out: list[int] = []
    for z in c:
        out.extend((z.a, z.b))
    return out


def hermitian_from_trace(t1: int, t2: int) -> EisInt:
    """Recover h = (v, x) from t1 = Tr(v, x) and t2 = Tr(v, w*x)."""
    # t1 = 2a - b, t2 = 2b - a for h = a + b*w
    a, ra = divmod(2 * t1 + t2, 3)
    b, rb = divmod(t1 + 2 * t2, 3)
    if ra or rb:
        raise ValueError(f"({t1}, {t2}) are not the traces of an Eisenstein integer")
    return EisInt(a, b)
