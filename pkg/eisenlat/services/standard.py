"""
eisenlat - Standard lattices
I_n, A_n, D_n(2), D_n(sqrt-3), E_6, E_7, E_8, U_5 and U_6 as explicit
generator presentations.
"""

import re
from fractions import Fraction
from functools import lru_cache

from eisenlat.core.exceptions import ValidationError
from eisenlat.models.eisenstein import OMEGA, OMEGA2, SQRT_M3, EisInt, EisRat
from eisenlat.models.lattice import AmbientSpace, HermitianLattice

# 1/sqrt(-3) = (-1 - 2w)/3
INV_SQRT_M3 = EisRat(EisInt(-1, -2), 3)

MAX_RANK = 16

_NAME_RE = re.compile(
    r"^(?P<family>[IADEU])_?\(?(?P<n>\d+)\)?(?:\((?P<alpha>2|sqrt-3|√-3|√−3)\))?$"
)

# Bourbaki simple roots of E8 in R^8; E7 and E6 take the first 7 and 6
_H = Fraction(1, 2)
_E8_ROOTS: tuple[tuple[Fraction, ...], ...] = (
    (_H, -_H, -_H, -_H, -_H, -_H, -_H, _H),
    (1, 1, 0, 0, 0, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0, 0, 0),
    (0, -1, 1, 0, 0, 0, 0, 0),
    (0, 0, -1, 1, 0, 0, 0, 0),
    (0, 0, 0, -1, 1, 0, 0, 0),
    (0, 0, 0, 0, -1, 1, 0, 0),
    (0, 0, 0, 0, 0, -1, 1, 0),
)

# glue vectors of E7#/E7 and E6#/E6 in the same coordinates
E7_GLUE = (0, 0, 0, 0, 0, 1, _H, -_H)
E6_GLUE = (0, 0, 0, 0, 1, Fraction(1, 3), Fraction(1, 3), -Fraction(1, 3))


def _check_rank(n: int, low: int = 1) -> None:
    if not low <= n <= MAX_RANK:
        raise ValidationError(f"rank {n} outside {low}..{MAX_RANK}")


def _unit(n: int, i: int, value: EisRat | EisInt | int = 1) -> list[EisRat]:
    row = [EisRat(0)] * n
    row[i] = EisRat.coerce(value)
    return row


def _differences(n: int, dim: int) -> list[list[EisRat]]:
    """e_i - e_{i+1} for i < n."""
    rows = []
    for i in range(n):
        row = [EisRat(0)] * dim
        row[i] = EisRat(1)
        row[i + 1] = EisRat(-1)
        rows.append(row)
    return rows


def lattice_i(n: int) -> HermitianLattice:
    _check_rank(n)
    return HermitianLattice.standard(n)


def lattice_a(n: int) -> HermitianLattice:
    """A_n inside I_{n+1}: the vectors with coordinate sum 0."""
    _check_rank(n)
    return HermitianLattice(AmbientSpace.standard(n + 1), _differences(n, n + 1), name=f"A_{n}", check=False)


def lattice_d(n: int, alpha: str) -> HermitianLattice:
    """D_n(alpha) = {x in Z[w]^n : sum(x) = 0 mod alpha} for alpha in {2, sqrt-3}."""
    _check_rank(n, 2)
    if alpha == "2":
        a, label = EisInt(2), "D_{n}(2)"
    elif alpha in ("sqrt-3", "√-3", "√−3"):
        a, label = SQRT_M3, "D_{n}(sqrt-3)"
    else:
        raise ValidationError(f"unsupported D_n parameter {alpha!r}")
    rows = _differences(n - 1, n) + [_unit(n, 0, a)]
    return HermitianLattice(AmbientSpace.standard(n), rows, name=label.format(n=n), check=False)


def lattice_e(k: int) -> HermitianLattice:
    """Z[w] tensor E_k in an 8-dimensional orthonormal block."""
    if k not in (6, 7, 8):
        raise ValidationError(f"E_{k} does not exist")
    rows = [[EisRat.coerce(Fraction(x)) for x in r] for r in _E8_ROOTS[:k]]
    return HermitianLattice(AmbientSpace.standard(8), rows, name=f"E_{k}", check=False)


def lattice_u5() -> HermitianLattice:
    """U_5 = <A_5, (1/sqrt-3)(1, w, w^2, 1, w, w^2)>."""
    cycle = (EisInt(1), OMEGA, OMEGA2)
    glue = [INV_SQRT_M3 * cycle[i % 3] for i in range(6)]
    return HermitianLattice.from_generators(AmbientSpace.standard(6), _differences(5, 6) + [glue], name="U_5")


def lattice_u6() -> HermitianLattice:
    """U_6 = <D_6(sqrt-3), (1/sqrt-3)(1, ..., 1)>."""
    base = lattice_d(6, "sqrt-3")
    glue = [INV_SQRT_M3] * 6
    return HermitianLattice.from_generators(base.ambient, base.basis + [glue], name="U_6")


@lru_cache(maxsize=None)
def standard(name: str) -> HermitianLattice:
    """Build a standard lattice from names like "I14", "A_8", "D_5(sqrt-3)", "E7", "U6"."""
    m = _NAME_RE.match(name.strip().replace(" ", ""))
    if not m:
        raise ValidationError(f"unknown lattice name {name!r}")
    family, n, alpha = m.group("family"), int(m.group("n")), m.group("alpha")
    if family == "D":
        if alpha is None:
            raise ValidationError(f"{name!r}: D_n needs a parameter, D_n(2) or D_n(sqrt-3)")
        return lattice_d(n, alpha)
    if alpha is not None:
        raise ValidationError(f"{name!r}: only D_n takes a parameter")
    if family == "I":
        return lattice_i(n)
    if family == "A":
        return lattice_a(n)
    if family == "E":
        return lattice_e(n)
    if n == 5:
        return lattice_u5()
    if n == 6:
        return lattice_u6()
    raise ValidationError(f"U_{n} does not exist; only U_5 and U_6")
