"""
eisenlat - Mass bookkeeping
Exact mass constants M_n, M_n(2), Y_n, Y_n(2) for n = 14, 15, the printed
approximations of M_13..M_17, and partial sums over the catalog.

M_n sums 1/|G(L)| over all unimodular classes of rank n, Y_n over those
without vectors of norm 1; the (2) variants weight each class by mu2.
"""

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Any

from eisenlat.core.exceptions import ValidationError
from eisenlat.models.schemas import CatalogRow
from eisenlat.services.catalog import parse_order, resolve_conjugates

logger = logging.getLogger(__name__)

_EXACT_TEXT = {
    "M14": "689532652191539/2^25.3^19.5^3.11",
    "M14(2)": "1722885336811913/2^23.3^17.5^3.11",
    "Y14": "902121810728981/2^24.3^14.5^3.7^2.11.13",
    "Y14(2)": "321547203435163/2^22.3^12.5^3.11.13",
    "M15": "4366489808207046403/2^26.3^21.5^3.11",
    "M15(2)": "1884491476714586441/2^24.3^18.5^3.11",
    "Y15": "3619970721202760389/2^18.3^20.5^3.7^2.11.13",
    "Y15(2)": "312324214206248801/2^16.3^17.5^2.7^2.11.13",
}

# printed approximations of M_n
_APPROX_TEXT = {
    13: "0.00000014",
    14: "0.000012",
    15: "0.0045",
    16: "6.57",
    17: "42188.20",
}


def parse_fraction(text: str) -> Fraction:
    """"689532652191539/2^25.3^19.5^3.11" -> exact fraction."""
    num, sep, den = text.strip().partition("/")
    if not sep:
        return Fraction(parse_order(num))
    return Fraction(parse_order(num), parse_order(den))


@dataclass(frozen=True)
class MassConstants:
    exact: dict[str, Fraction] = field(default_factory=dict)
    texts: dict[str, str] = field(default_factory=dict)
    approx: dict[int, str] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Fraction:
        return self.exact[key]

    def to_dict(self) -> dict[str, Any]:
        return {
            "exact": {k: {"factored": self.texts[k], "value": str(v), "float": float(v)} for k, v in self.exact.items()},
            "approx": {f"M{n}": a for n, a in self.approx.items()},
        }


@lru_cache(maxsize=None)
def published_constants() -> MassConstants:
    exact = {k: parse_fraction(v) for k, v in _EXACT_TEXT.items()}
    return MassConstants(exact, dict(_EXACT_TEXT), dict(_APPROX_TEXT))


def _within_last_digit(value: Fraction, printed: str) -> bool:
    p = Decimal(printed)
    unit = Decimal(1).scaleb(p.as_tuple().exponent)
    return abs(Fraction(value) - Fraction(p)) <= Fraction(unit)


def approx_check(constants: MassConstants | None = None) -> list[dict[str, Any]]:
    """Compare each exact M_n with its printed approximation (one unit in the last digit)."""
    c = constants or published_constants()
    out = []
    for n, printed in c.approx.items():
        exact = c.exact.get(f"M{n}")
        entry: dict[str, Any] = {"n": n, "printed": printed}
        if exact is None:
            entry["status"] = "printed-only"
        else:
            ok = _within_last_digit(exact, printed)
            entry.update(value=float(exact), status="ok" if ok else "mismatch")
            if not ok:
                logger.warning(f"⚠️ M{n} = {float(exact):.3g} does not round to {printed}")
        out.append(entry)
    for n in (14, 15):
        for suffix in ("", "(2)"):
            y, m = c.exact[f"Y{n}{suffix}"], c.exact[f"M{n}{suffix}"]
            if not 0 < y < m:
                out.append({"n": n, "printed": f"Y{n}{suffix} < M{n}{suffix}", "status": "mismatch"})
    return out


def partial_mass(rows: list[CatalogRow]) -> tuple[Fraction, Fraction]:
    """(sum 1/|G|, sum mu2/|G|) over rows that carry their data."""
    total, weighted = Fraction(0), Fraction(0)
    for r in rows:
        if r.group_order is None or r.mu2 is None:
            raise ValidationError(f"row {r.rank}/{r.no} has no group order; resolve conjugates first", [r.no])
        g = parse_order(r.group_order)
        total += Fraction(1, g)
        weighted += Fraction(r.mu2, g)
    return total, weighted


def mass_report(rows: list[CatalogRow], rank: int) -> dict[str, Any]:
    """Partial sums for one rank, compared with Y_rank and Y_rank(2)."""
    c = published_constants()
    if f"Y{rank}" not in c.exact:
        raise ValidationError(f"no mass constants for rank {rank}")
    selected = [r for r in resolve_conjugates(rows) if r.rank == rank]
    s, s2 = partial_mass(selected)
    y, y2 = c[f"Y{rank}"], c[f"Y{rank}(2)"]
    report = {
        "rank": rank,
        "rows": len(selected),
        "mass": str(s),
        "mass_mu2": str(s2),
        "Y": str(y),
        "Y(2)": str(y2),
        "deficit": str(y - s),
        "deficit_mu2": str(y2 - s2),
        "below_Y": s < y,
        "below_Y(2)": s2 < y2,
        "relative_deficit": float((y - s) / y),
        "relative_deficit_mu2": float((y2 - s2) / y2),
    }
    logger.info(f"⚖️ rank {rank}: {len(selected)} rows, mass {float(s):.6e} vs Y{rank} {float(y):.6e}")
    return report
