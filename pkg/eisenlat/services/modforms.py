"""
eisenlat - q-series
Truncated integer power series, eta products, the theta series of the
Eisenstein integers and the weight-14 basis that pins down the theta
series of a rank-14 unimodular lattice from its first two coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from eisenlat.core.config import settings
from eisenlat.core.exceptions import ValidationError

# norm-3 count shared by every rank-14 unimodular lattice without norm-1 vectors
N3_MIN2 = 17472


# ==================== series ====================


@dataclass(frozen=True)
class QSeries:
    """c_0 + c_1 q + ... + c_prec q^prec + O(q^(prec+1))."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a q-series needs at least c_0")

    @classmethod
    def of(cls, coeffs: Sequence[int], prec: int | None = None) -> QSeries:
        c = [int(x) for x in coeffs]
        if prec is not None:
            c = (c + [0] * (prec + 1))[: prec + 1]
        return cls(tuple(c))

    @classmethod
    def one(cls, prec: int) -> QSeries:
        return cls.of([1], prec)

    @classmethod
    def q(cls, prec: int) -> QSeries:
        return cls.of([0, 1], prec)

    @property
    def prec(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        if k > self.prec:
            raise IndexError(f"coefficient q^{k} is beyond the precision {self.prec}")
        return self.coeffs[k] if k >= 0 else 0

    def truncate(self, prec: int) -> QSeries:
        if prec > self.prec:
            raise ValueError(f"cannot raise precision from {self.prec} to {prec}")
        return QSeries(self.coeffs[: prec + 1])

    def __add__(self, other: QSeries) -> QSeries:
        p = min(self.prec, other.prec)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs[: p + 1], other.coeffs[: p + 1])))

    def __neg__(self) -> QSeries:
        return QSeries(tuple(-a for a in self.coeffs))

    def __sub__(self, other: QSeries) -> QSeries:
        return self + (-other)

    def __mul__(self, other: QSeries | int) -> QSeries:
        if isinstance(other, int):
            return QSeries(tuple(other * a for a in self.coeffs))
        p = min(self.prec, other.prec)
        out = [0] * (p + 1)
        for i, a in enumerate(self.coeffs[: p + 1]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: p + 1 - i]):
                out[i + j] += a * b
        return QSeries(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QSeries:
        if n < 0:
            raise ValueError("only non-negative powers")
        result, base = QSeries.one(self.prec), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            coef = str(c) if (k == 0 or abs(c) != 1) else ("-" if c < 0 else "")
            terms.append(f"{coef}{mono}")
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        return f"{body} + O(q^{self.prec + 1})"

    def to_list(self) -> list[int]:
        return list(self.coeffs)


# ==================== eta products and theta ====================


def eta_product(factors: Sequence[tuple[int, int]], prec: int) -> QSeries:
    """prod eta(d*tau)^e = q^(sum d*e / 24) * prod_n (1 - q^(d*n))^e."""
    shift, rem = divmod(sum(d * e for d, e in factors), 24)
    if rem:
        raise ValueError(f"eta product {list(factors)} has a fractional q-power")
    if any(d <= 0 or e < 0 for d, e in factors):
        raise ValueError("eta products need positive levels and non-negative exponents")
    out = [0] * (prec + 1)
    if shift <= prec:
        out[shift] = 1
    series = QSeries(tuple(out))
    for d, e in factors:
        if not e:
            continue
        for n in range(1, prec // d + 1):
            one_minus = QSeries.of([1] + [0] * (d * n - 1) + [-1], prec)
            series = series * one_minus ** e
    return series


def delta3(prec: int | None = None) -> QSeries:
    """eta(q)^6 eta(q^3)^6 = q - 6q^2 + 9q^3 + ..."""
    return eta_product([(1, 6), (3, 6)], settings.theta_prec if prec is None else prec)


def theta_a2(prec: int | None = None) -> QSeries:
    """sum over x in Z[w] of q^N(x) = 1 + 6 sum (d_1,3(n) - d_2,3(n)) q^n."""
    p = settings.theta_prec if prec is None else prec
    out = [1] + [0] * p
    for n in range(1, p + 1):
        s = 0
        for d in range(1, n + 1):
            if n % d == 0:
                s += {1: 1, 2: -1}.get(d % 3, 0)
        out[n] = 6 * s
    return QSeries(tuple(out))


def weight14_basis(prec: int | None = None) -> tuple[QSeries, QSeries, QSeries]:
    """(theta^14, theta^8 Delta, theta^2 Delta^2) for theta = theta_a2, Delta = delta3."""
    p = settings.theta_prec if prec is None else prec
    th, dl = theta_a2(p), delta3(p)
    return th ** 14, th ** 8 * dl, th ** 2 * dl ** 2


def decompose_theta(theta: QSeries) -> tuple[int, int]:
    """(a, c) with theta = theta^14 + a theta^8 Delta + c theta^2 Delta^2.

    Solved from q^1 and q^2; every higher coefficient must then agree.
    """
    if theta.prec < 3:
        raise ValidationError(f"decompose_theta needs precision >= 3, got {theta.prec}")
    if theta[0] != 1:
        raise ValidationError(f"theta series must start with 1, got {theta[0]}")
    b0, b1, b2 = weight14_basis(theta.prec)
    a = theta[1] - b0[1]
    c = theta[2] - b0[2] - a * b1[2]
    residual = theta - (b0 + a * b1 + c * b2)
    bad = [k for k, x in enumerate(residual.coeffs) if x]
    if bad:
        raise ValidationError(f"theta series is not in the weight-14 space (residual at q^{bad[0]})", bad)
    return a, c


def theta_from_counts(n1: int, n2: int, prec: int | None = None) -> QSeries:
    """The rank-14 unimodular theta series with N_1 = n1 and N_2 = n2."""
    p = settings.theta_prec if prec is None else prec
    b0, b1, b2 = weight14_basis(max(p, 2))
    a = n1 - b0[1]
    c = n2 - b0[2] - a * b1[2]
    return (b0 + a * b1 + c * b2).truncate(p)


def predicted_theta(mu2: int, prec: int | None = None) -> QSeries:
    """Theta series of a rank-14 unimodular lattice of minimum >= 2 with mu2 roots."""
    return theta_from_counts(0, mu2, prec)
