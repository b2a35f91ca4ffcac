"""
eisenlat - Basis reduction
Exact LLL on integer Gram matrices (the trace form) and on Hermitian
Gram matrices over Z[w]. Both work on the Gram matrix only and return the
change of basis alongside the reduced Gram.
"""

import logging
from fractions import Fraction
from math import floor
from typing import Sequence

from eisenlat.core.config import settings
from eisenlat.core.exceptions import ValidationError
from eisenlat.models.eisenstein import EisInt, EisRat
from eisenlat.models.lattice import HermitianLattice
from eisenlat.models.matrix import RatMatrix, mat_mul, to_rat

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def _delta(delta: Fraction | None) -> Fraction:
    return settings.lll_delta_fraction if delta is None else Fraction(delta)


# ==================== integer Gram (trace form) ====================


def reduce_trace_basis(
    gram: Sequence[Sequence[int]],
    delta: Fraction | None = None,
) -> tuple[list[list[int]], list[list[int]]]:
    """LLL-reduce a positive definite integer Gram.

    Returns (U, G') with U unimodular and G' = U * G * U^T. The result
    satisfies |mu_ij| <= 1/2 and B_k >= (delta - mu_{k,k-1}^2) * B_{k-1}.
    """
    d = _delta(delta)
    n = len(gram)
    G = [[int(x) for x in row] for row in gram]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n == 0:
        return U, G
    mu, B = _gso_int(G)

    def red(k: int, l: int) -> None:
        if abs(mu[k][l]) <= HALF:
            return
        q = floor(mu[k][l] + HALF)
        U[k] = [x - q * y for x, y in zip(U[k], U[l])]
        G[k] = [x - q * y for x, y in zip(G[k], G[l])]
        for row in G:
            row[k] -= q * row[l]
        mu[k][l] -= q
        for j in range(l):
            mu[k][j] -= q * mu[l][j]

    def swap(k: int) -> None:
        U[k], U[k - 1] = U[k - 1], U[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        bn = B[k] + m * m * B[k - 1]
        mu[k][k - 1] = m * B[k - 1] / bn
        B[k] = B[k - 1] * B[k] / bn
        B[k - 1] = bn
        for i in range(k + 1, n):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    k, swaps = 1, 0
    while k < n:
        red(k, k - 1)
        if B[k] < (d - mu[k][k - 1] ** 2) * B[k - 1]:
            swap(k)
            swaps += 1
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    logger.debug(f"LLL: dim {n}, {swaps} swaps, max diagonal {max(G[i][i] for i in range(n))}")
    return U, G


def _gso_int(G: list[list[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(G[i][j]) - sum((mu[j][k] * mu[i][k] * B[k] for k in range(j)), Fraction(0))
            mu[i][j] = s / B[j]
        B[i] = G[i][i] - sum((mu[i][k] ** 2 * B[k] for k in range(i)), Fraction(0))
        if B[i] <= 0:
            raise ValidationError("Gram matrix is not positive definite")
    return mu, B


def _is_lll_reduced(gram: Sequence[Sequence[int]], delta: Fraction | None = None) -> bool:
    d = _delta(delta)
    G = [[int(x) for x in row] for row in gram]
    if not G:
        return True
    mu, B = _gso_int(G)
    n = len(G)
    if any(abs(mu[i][j]) > HALF for i in range(n) for j in range(i)):
        return False
    return all(B[k] >= (d - mu[k][k - 1] ** 2) * B[k - 1] for k in range(1, n))


# ==================== Hermitian Gram over Z[w] ====================


def _nearest(x: EisRat) -> EisInt:
    return divmod(x.num, x.den)[0]


def lll_hermitian(
    gram: RatMatrix,
    delta: Fraction | None = None,
) -> tuple[list[list[EisInt]], RatMatrix]:
    """LLL over the Euclidean ring Z[w]; returns (U, U * G * U^*)."""
    d = _delta(delta)
    n = len(gram)
    G = [list(row) for row in gram]
    U = [[EisInt(1) if i == j else EisInt(0) for j in range(n)] for i in range(n)]
    if n == 0:
        return U, G
    mu = [[EisRat(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j]
            for k in range(j):
                s = s - mu[i][k] * mu[j][k].conj() * B[k]
            mu[i][j] = s * EisRat.coerce(1 / B[j])
        b = G[i][i].to_fraction()
        for k in range(i):
            b -= mu[i][k].norm() * B[k]
        if b <= 0:
            raise ValidationError("Hermitian Gram matrix is not positive definite")
        B[i] = b

    def red(k: int, l: int) -> None:
        q = _nearest(mu[k][l])
        if not q:
            return
        U[k] = [x - q * y for x, y in zip(U[k], U[l])]
        G[k] = [x - q * y for x, y in zip(G[k], G[l])]
        qc = q.conj()
        for row in G:
            row[k] = row[k] - qc * row[l]
        mu[k][l] = mu[k][l] - q
        for j in range(l):
            mu[k][j] = mu[k][j] - q * mu[l][j]

    def swap(k: int) -> None:
        U[k], U[k - 1] = U[k - 1], U[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        bn = B[k] + m.norm() * B[k - 1]
        mu[k][k - 1] = m.conj() * EisRat.coerce(B[k - 1] / bn)
        B[k] = B[k - 1] * B[k] / bn
        B[k - 1] = bn
        for i in range(k + 1, n):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    k = 1
    while k < n:
        red(k, k - 1)
        if B[k] < (d - mu[k][k - 1].norm()) * B[k - 1]:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return U, G


def reduced_basis(L: HermitianLattice) -> HermitianLattice:
    """Same lattice with an LLL-reduced Z[w]-basis."""
    U, _ = lll_hermitian(L.gram)
    return L.with_basis(mat_mul(to_rat(U), L.basis))
