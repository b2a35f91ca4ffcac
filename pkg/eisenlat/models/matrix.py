"""
eisenlat - Exact linear algebra
Dense matrices as lists of rows over Z[w] (EisInt) or Q(w) (EisRat).
"""

from __future__ import annotations

from typing import Sequence

from eisenlat.models.eisenstein import EisInt, EisRat, common_denominator, eis_xgcd

IntMatrix = list[list[EisInt]]
RatMatrix = list[list[EisRat]]

ZERO = EisRat(0)
ONE = EisRat(1)


def to_rat(rows: Sequence[Sequence[EisInt | EisRat | int]]) -> RatMatrix:
    return [[EisRat.coerce(x) for x in row] for row in rows]


def identity(n: int) -> RatMatrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    cols = list(zip(*b)) if b else []
    out = []
    for row in a:
        out.append([_dot(row, col) for col in cols])
    return out


def vec_mat(v: Sequence[EisRat], m: RatMatrix) -> list[EisRat]:
    """Row vector times matrix."""
    if not m:
        return []
    out = [ZERO] * len(m[0])
    for coef, row in zip(v, m):
        if not coef:
            continue
        out = [o + coef * x for o, x in zip(out, row)]
    return out


def conj_transpose(m: RatMatrix) -> RatMatrix:
    return [list(col) for col in zip(*[[x.conj() for x in row] for row in m])]


def _dot(u: Sequence[EisRat], v: Sequence[EisRat]) -> EisRat:
    acc = ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def scale_to_integral(rows: RatMatrix) -> tuple[IntMatrix, int]:
    """Return (D*rows as EisInt, D) for the least common denominator D."""
    d = common_denominator([x for row in rows for x in row])
    return [[(x * d).to_eisint() for x in row] for row in rows], d


def is_integral_matrix(rows: RatMatrix) -> bool:
    return all(x.is_integral() for row in rows for x in row)


# ==================== Hermite normal form ====================


def hermite_form(rows: Sequence[Sequence[EisInt]]) -> IntMatrix:
    """Canonical row echelon basis of the Z[w]-module spanned by `rows`.

    Pivots are canonical associates, entries above a pivot are reduced to
    the nearest-point remainder. Zero rows are dropped.
    """
    if not rows:
        return []
    width = len(rows[0])
    pivots: dict[int, list[EisInt]] = {}
    for row in rows:
        _insert_row(pivots, list(row), width)
    echelon = [pivots[c] for c in sorted(pivots)]
    # top-down: pivot row k is zero left of its pivot, so earlier columns stay reduced
    cols = sorted(pivots)
    for k in range(len(echelon)):
        c = cols[k]
        p = echelon[k]
        for i in range(k):
            e = echelon[i][c]
            if e:
                q, _ = divmod(e, p[c])
                if q:
                    echelon[i] = [x - q * y for x, y in zip(echelon[i], p)]
    return echelon


def _insert_row(pivots: dict[int, list[EisInt]], row: list[EisInt], width: int) -> None:
    c = 0
    while c < width:
        if not row[c]:
            c += 1
            continue
        p = pivots.get(c)
        if p is None:
            _, u = row[c].canonical_associate()
            pivots[c] = [u * x for x in row]
            return
        q, r = divmod(row[c], p[c])
        if not r:
            row = [x - q * y for x, y in zip(row, p)]
            c += 1
            continue
        g, s, t = eis_xgcd(p[c], row[c])
        pc, rc = p[c].exact_div(g), row[c].exact_div(g)
        new_pivot = [s * x + t * y for x, y in zip(p, row)]
        row = [pc * y - rc * x for x, y in zip(p, row)]
        _, u = new_pivot[c].canonical_associate()
        pivots[c] = [u * x for x in new_pivot]
        c += 1


class HermiteAccumulator:
    """Hermite form of a module that grows one generator at a time."""

    # re-reduce above the pivots this often to keep entries small
    RENORMALIZE_EVERY = 64

    def __init__(self, width: int) -> None:
        self.width = width
        self.pivots: dict[int, list[EisInt]] = {}
        self._added = 0

    def add(self, row: Sequence[EisInt]) -> None:
        _insert_row(self.pivots, list(row), self.width)
        self._added += 1
        if self._added % self.RENORMALIZE_EVERY == 0:
            self.pivots = {next(i for i, x in enumerate(r) if x): r for r in self.rows()}

    def rows(self) -> IntMatrix:
        return hermite_form([self.pivots[c] for c in sorted(self.pivots)])

    def is_full(self) -> bool:
        """True once the rows generate all of Z[w]^width."""
        return len(self.pivots) == self.width and all(p[c].is_unit() for c, p in self.pivots.items())


def elementary_divisors(rows: Sequence[Sequence[EisInt]]) -> list[EisInt]:
    """Smith form diagonal d_1 | d_2 | ... of the row module, as canonical associates."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    divisors: list[EisInt] = []
    for t in range(min(m, n)):
        entries = [(A[i][j].norm(), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        A[t], A[i0] = A[i0], A[t]
        for row in A:
            row[t], row[j0] = row[j0], row[t]
        while True:
            p = A[t][t]
            swapped = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q, r = divmod(A[i][t], p)
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if r:
                        A[t], A[i] = A[i], A[t]
                        swapped = True
                        break
            if swapped:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q, r = divmod(A[t][j], p)
                    for row in A:
                        row[j] = row[j] - q * row[t]
                    if r:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        swapped = True
                        break
            if swapped:
                continue
            # d_t must divide everything left over
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        divisors.append(A[t][t].canonical_associate()[0])
    return divisors


def rational_hermite_form(rows: RatMatrix) -> RatMatrix:
    """Hermite form of a module given by rational generators."""
    if not rows:
        return []
    ints, d = scale_to_integral(rows)
    return [[EisRat(x, d) for x in row] for row in hermite_form(ints)]


# ==================== determinants and inverses ====================


def det(m: RatMatrix) -> EisRat:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return ONE
    ints, d = scale_to_integral(m)
    a = [row[:] for row in ints]
    sign = 1
    prev = EisInt(1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = EisInt(0)
        prev = a[k][k]
    return EisRat(a[n - 1][n - 1] * sign, d**n)


def inverse(m: RatMatrix) -> RatMatrix:
    """Gauss-Jordan inverse over Q(w); raises ZeroDivisionError when singular."""
    n = len(m)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            f = aug[i][c]
            if i != c and f:
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def rank(rows: RatMatrix) -> int:
    return len(row_echelon(rows))


def row_echelon(rows: RatMatrix) -> RatMatrix:
    """Reduced row echelon form over Q(w), zero rows dropped."""
    work = [list(r) for r in rows]
    out: RatMatrix = []
    if not work:
        return out
    width = len(work[0])
    for c in range(width):
        piv = next((i for i, r in enumerate(work) if r[c]), None)
        if piv is None:
            continue
        p = work.pop(piv)
        inv = p[c].inverse()
        p = [x * inv for x in p]
        work = [[x - r[c] * y for x, y in zip(r, p)] if r[c] else r for r in work]
        out = [[x - r[c] * y for x, y in zip(r, p)] if r[c] else r for r in out]
        out.append(p)
    return out


def solve_left(basis: RatMatrix, v: Sequence[EisRat]) -> list[EisRat] | None:
    """Coefficients c with c * basis = v, or None if v is outside the span."""
    n = len(basis)
    if n == 0:
        return [] if not any(v) else None
    width = len(basis[0])
    # echelon on [basis | I] tracks the combination producing each echelon row
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(basis)]
    target = list(v) + [ZERO] * n
    used = [False] * n
    for c in range(width):
        piv = next((i for i in range(n) if not used[i] and aug[i][c]), None)
        if piv is None:
            continue
        used[piv] = True
        inv = aug[piv][c].inverse()
        aug[piv] = [x * inv for x in aug[piv]]
        for i in range(n):
            if i != piv and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[piv])]
        if target[c]:
            f = target[c]
            target = [x - f * y for x, y in zip(target, aug[piv])]
    if any(target[:width]):
        return None
    # right half of target is minus the combination used
    return [-x for x in target[width:]]
