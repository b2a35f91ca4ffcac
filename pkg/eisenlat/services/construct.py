"""
eisenlat - Constructions
Code lifts, glue recipes, exterior squares and the scaled A_{n-1} + code
construction. Standard lattices live in `standard`; complex conjugation
in the lattice model (re-exported here).
"""

import logging
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence

from eisenlat.core.config import settings
from eisenlat.core.exceptions import RankError, ValidationError
from eisenlat.models import matrix as mx
from eisenlat.models.code import F4Code
from eisenlat.models.eisenstein import F4_ONE, F4_W, F4_W2, EisInt, EisRat
from eisenlat.models.lattice import (
    AmbientSpace,
    HermitianLattice,
    Line,
    OrthonormalBlock,
    conjugate,
    orthogonal_sum,
)
from eisenlat.models.schemas import CatalogRow, GlueRecipe, read_json
from eisenlat.services.standard import standard

logger = logging.getLogger(__name__)

__all__ = [
    "build_recipe",
    "build_row",
    "code_weight_distribution",
    "conjugate",
    "exterior_gram",
    "exterior_square",
    "from_code",
    "glue",
    "hexacode",
    "lift_exterior_automorphism",
    "load_code",
    "predicted_mu2",
    "quadratic_residue_code",
    "scaled_an_code",
]

HALF = Fraction(1, 2)


# ==================== codes ====================


def load_code(name_or_path: str | Path) -> F4Code:
    """A shipped code by name ("qr14") or any code file path."""
    path = Path(name_or_path)
    if not path.suffix:
        path = settings.data_path("codes", f"{name_or_path}.json")
    if not path.exists():
        raise ValidationError(f"code file {path} not found")
    return F4Code.from_file(read_json(path))


def hexacode() -> F4Code:
    return load_code("hexacode")


def code_weight_distribution(C: F4Code) -> dict[int, int]:
    return C.weight_distribution()


def predicted_mu2(C: F4Code) -> int:
    """Roots of the lift: 2u*e_i (6 per coordinate) and 16 unit lifts per weight-4 word."""
    return 6 * C.length + 16 * C.weight_distribution().get(4, 0)


def quadratic_residue_code(p: int) -> F4Code:
    """Extended quadratic residue code of length p+1 for primes p = 5 (mod 8).

    Spanned by the cyclic shifts of e with e_0 = 1, e_i = w on residues and
    w2 on non-residues, each extended by a coordinate 1.
    """
    if p < 5 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)) or p % 8 != 5:
        raise ValidationError(f"quadratic residue codes over F4 need a prime p = 5 mod 8, got {p}")
    residues = {(i * i) % p for i in range(1, p)}
    e = [F4_ONE] + [F4_W if i in residues else F4_W2 for i in range(1, p)]
    rows = [[e[(j - k) % p] for j in range(p)] + [F4_ONE] for k in range(p)]
    return F4Code(p + 1, rows, name=f"qr{p + 1}")


# ==================== code lift ====================


def _code_preimage_generators(C: F4Code) -> list[list[EisInt]]:
    n = C.length
    rows = [[EisInt(2) if i == j else EisInt(0) for j in range(n)] for i in range(n)]
    rows += [[x.lift() for x in word] for word in C.basis]
    return rows


def from_code(C: F4Code) -> HermitianLattice:
    """(1/sqrt2) * {x in Z[w]^n : x mod 2 in C} for a Hermitian self-dual code C."""
    if not C.is_self_dual():
        raise ValidationError(f"code {C.name or ''} is not Hermitian self-dual (n={C.length}, k={C.dimension})")
    ambient = AmbientSpace.standard(C.length, form_scale=HALF)
    L = HermitianLattice.from_generators(ambient, _code_preimage_generators(C), name=f"lift({C.name})" if C.name else None)
    if not L.is_unimodular():
        raise ValidationError(f"code lift has discriminant {L.discriminant}")
    return L


def scaled_an_code(r: EisInt, C: F4Code) -> HermitianLattice:
    """(code preimage meet A_{n-1}) + Z[w] * (1/r)(1-n, 1, ..., 1), n = 2 N(r), form scaled by 1/2."""
    n = C.length
    if n != 2 * r.norm():
        raise ValidationError(f"code length {n} does not equal 2*N({r}) = {2 * r.norm()}")
    if not C.is_self_dual():
        raise ValidationError("the scaled A_n construction needs a self-dual code")
    # rows (sum(x), x): in Hermite form only the first row has a nonzero sum
    augmented = [[sum(row, EisInt(0))] + row for row in _code_preimage_generators(C)]
    hnf = mx.hermite_form(augmented)
    kernel = [row[1:] for row in hnf if not row[0]]
    glue_row = [EisRat(1 - n)] + [EisRat(1)] * (n - 1)
    glue_row = [x / r for x in glue_row]
    ambient = AmbientSpace.standard(n, form_scale=HALF)
    L = HermitianLattice.from_generators(ambient, [[EisRat(x) for x in row] for row in kernel] + [glue_row],
                                         name=f"A_{n - 1}+{C.name or 'code'}/({r})")
    if L.rank != n - 1:
        raise RankError(f"expected rank {n - 1}, got {L.rank}")
    if not L.is_unimodular():
        raise ValidationError(f"scaled A_{n - 1} construction is not unimodular (d = {L.discriminant}); "
                              "the code must contain the all-ones word")
    return L


# ==================== glue ====================


def _line_lattice(norm: Fraction) -> HermitianLattice:
    return HermitianLattice(AmbientSpace((Line(norm),)), [[EisRat(1)]], check=False)


def glue(recipe: GlueRecipe) -> HermitianLattice:
    """Orthogonal sum of the recipe's components and lines, enlarged by its glue rows."""
    parts = [standard(name) for name in recipe.components]
    parts += [_line_lattice(EisRat.parse(x).to_fraction()) for x in recipe.lines]
    if not parts:
        raise ValidationError(f"recipe {recipe.id} has no components")
    base = parts[0]
    for M in parts[1:]:
        base = orthogonal_sum(base, M)
    # every part occupies exactly one ambient block
    if len(base.ambient.blocks) != len(parts):
        raise ValidationError(f"recipe {recipe.id}: component ambients are not single blocks")

    glue_rows = []
    for r, terms in enumerate(recipe.glue):
        row = [EisRat(0)] * base.dim
        for t in terms:
            if t.block >= len(parts):
                raise ValidationError(f"recipe {recipe.id}: glue row {r} names block {t.block}", [r])
            coef = EisRat.parse(t.coef)
            v = base.ambient.embed(t.block, [coef * EisRat.parse(x) for x in t.vector])
            row = [a + b for a, b in zip(row, v)]
        glue_rows.append(row)

    generators = base.basis + glue_rows
    _check_integral(base.ambient, generators, recipe.id, len(base.basis))
    L = HermitianLattice.from_generators(base.ambient, generators, name=recipe.id)
    if L.rank != base.rank:
        raise RankError(f"recipe {recipe.id}: glue changed the rank to {L.rank}")
    return L


def _check_integral(ambient: AmbientSpace, rows: list[list[EisRat]], label: str, first_glue: int) -> None:
    """Raise with the first generator pair whose product is not in Z[w]."""
    for i in range(first_glue, len(rows)):
        for j in range(len(rows)):
            h = ambient.inner(rows[i], rows[j])
            if not h.is_integral():
                what = f"glue {i - first_glue}" + (f" with glue {j - first_glue}" if j >= first_glue else f" with generator {j}")
                raise ValidationError(f"{label}: {what} has product {h}", [i, j])


# ==================== exterior square ====================


def _wedge(x: Sequence[EisRat], y: Sequence[EisRat]) -> list[EisRat]:
    return [x[a] * y[b] - x[b] * y[a] for a, b in combinations(range(len(x)), 2)]


def exterior_gram(gram: mx.RatMatrix) -> mx.RatMatrix:
    """Gram of b_i ^ b_j (i < j): (x^y, x'^y') = (x,x')(y,y') - (x,y')(y,x')."""
    pairs = list(combinations(range(len(gram)), 2))
    return [
        [gram[i][k] * gram[j][l] - gram[i][l] * gram[j][k] for k, l in pairs]
        for i, j in pairs
    ]


def _exterior_ambient(ambient: AmbientSpace) -> AmbientSpace:
    w = [x.to_fraction() for x in ambient.weights]
    pairs = list(combinations(range(len(w)), 2))
    if len(set(w)) == 1:
        return AmbientSpace((OrthonormalBlock(len(pairs)),), w[0] * w[0])
    return AmbientSpace(tuple(Line(w[a] * w[b]) for a, b in pairs))


def exterior_square(L: HermitianLattice) -> HermitianLattice:
    """Lambda^2 L on the basis b_i ^ b_j, inside Lambda^2 of the ambient space."""
    if L.rank < 2:
        raise RankError("exterior square needs rank >= 2")
    if not L.is_integral():
        raise ValidationError("exterior square needs an integral lattice")
    rows = [_wedge(L.basis[i], L.basis[j]) for i, j in combinations(range(L.rank), 2)]
    name = f"ext2({L.name})" if L.name else None
    return HermitianLattice(_exterior_ambient(L.ambient), rows, name=name, check=False)


def lift_exterior_automorphism(g: Sequence[Sequence[EisInt]]) -> list[list[EisInt]]:
    """Matrix of x^y -> gx^gy on the basis b_i ^ b_j (rows are images, as in autiso)."""
    n = len(g)
    pairs = list(combinations(range(n), 2))
    return [
        [g[i][k] * g[j][l] - g[i][l] * g[j][k] for k, l in pairs]
        for i, j in pairs
    ]


# ==================== recipes and catalog rows ====================


def build_recipe(recipe: GlueRecipe) -> HermitianLattice:
    if recipe.code:
        L = from_code(load_code(recipe.code))
    elif recipe.exterior_square:
        L = exterior_square(standard(recipe.exterior_square))
    else:
        L = glue(recipe)
    L.name = recipe.id
    logger.debug(f"Built {recipe.id}: rank {L.rank}, d = {L.discriminant}")
    return L


def build_row(row: CatalogRow, rows: list[CatalogRow], recipes: dict[str, GlueRecipe]) -> HermitianLattice | None:
    """Lattice for a catalog row, or None when the row has no construction."""
    from eisenlat.services.catalog import recipe_for

    recipe_id, conjugated = recipe_for(row, rows)
    if recipe_id is None:
        return None
    if recipe_id not in recipes:
        raise ValidationError(f"row {row.rank}/{row.no} names unknown recipe {recipe_id!r}", [row.no])
    L = build_recipe(recipes[recipe_id])
    if conjugated:
        L = conjugate(L)
        L.name = f"conj({recipe_id})"
    return L
