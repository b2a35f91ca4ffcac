"""
eisenlat - Table verification
Builds every catalog row that has a construction and checks it against the
row's data: integral, unimodular, indecomposable, mu2, root system, the
17472 norm-3 vectors in rank 14 and, on request, the group order.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any

from eisenlat.core.exceptions import BudgetExceeded, EisenlatError
from eisenlat.models.lattice import HermitianLattice
from eisenlat.models.schemas import CatalogRow, GlueRecipe
from eisenlat.services.autiso import automorphism_group
from eisenlat.services.catalog import parse_order, resolve_conjugates, row_descriptor
from eisenlat.services.construct import build_row
from eisenlat.services.decompose import decompose
from eisenlat.services.enumerate import minimum, mu2, theta_coeffs
from eisenlat.services.modforms import predicted_theta
from eisenlat.services.roots import classify_roots

logger = logging.getLogger(__name__)

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclass
class RowResult:
    rank: int
    no: int
    status: str = SKIPPED
    checks: dict[str, bool | None] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    seconds: float | None = None

    def fail(self, name: str, message: str) -> None:
        self.checks[name] = False
        self.failures.append(message)

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {
            "rank": self.rank,
            "no": self.no,
            "status": self.status,
            "checks": self.checks,
            "failures": self.failures,
        }
        if timings and self.seconds is not None:
            data["seconds"] = round(self.seconds, 3)
        return data


@dataclass
class VerificationReport:
    rows: list[RowResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.rows)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "counts": self.counts(),
            "rows": [r.to_dict(timings) for r in self.rows],
        }


def _check_lattice(L: HermitianLattice, row: CatalogRow, result: RowResult, group_order: bool, budget: float | None) -> None:
    result.checks["constructed"] = True
    if L.rank != row.rank:
        result.fail("rank", f"rank mismatch: got {L.rank}, expected {row.rank}")
        return
    if not L.is_integral():
        result.fail("integral", "lattice is not integral")
        return
    result.checks["integral"] = True
    if L.discriminant != 1:
        result.fail("unimodular", f"discriminant {L.discriminant}, expected 1")
        return
    result.checks["unimodular"] = True

    parts = decompose(L)
    result.checks["indecomposable"] = len(parts) == 1
    if len(parts) != 1:
        result.failures.append(f"decomposes into ranks {[p.rank for p in parts]}")

    m = mu2(L)
    result.checks["mu2"] = m == row.mu2
    if m != row.mu2:
        result.failures.append(f"mu2 mismatch: got {m}, expected {row.mu2}")

    got = classify_roots(L)
    want = row_descriptor(row)
    result.checks["root_system"] = got == want
    if got != want:
        result.failures.append(f"root system mismatch: got {got}, expected {want}")

    if row.rank == 14:
        # minimum >= 2 fixes the theta series through q^3 from mu2 alone
        n3, expected = theta_coeffs(L, 3)[3], predicted_theta(row.mu2, 3)[3]
        result.checks["n3"] = n3 == expected
        if n3 != expected:
            result.failures.append(f"norm-3 count {n3}, expected {expected}")
    elif m == 0:
        low = minimum(L)
        result.checks["minimum"] = low == 3
        if low != 3:
            result.failures.append(f"root-free lattice has minimum {low}, expected 3")

    if group_order and row.group_order is not None:
        try:
            order = automorphism_group(L, budget=budget).order
        except BudgetExceeded:
            result.checks["group_order"] = None
            logger.warning(f"⏱️ {row.rank}/{row.no}: group order not decided within budget")
        else:
            expected = parse_order(row.group_order)
            result.checks["group_order"] = order == expected
            if order != expected:
                result.failures.append(f"group order {order}, expected {expected}")


def verify_row(
    row: CatalogRow,
    rows: list[CatalogRow],
    recipes: dict[str, GlueRecipe],
    group_order: bool = False,
    budget: float | None = None,
) -> RowResult:
    """Build one (conjugate-resolved) row and run every applicable check."""
    result = RowResult(row.rank, row.no)
    started = time.monotonic()
    try:
        L = build_row(row, rows, recipes)
        if L is None:
            return result
        _check_lattice(L, row, result, group_order, budget)
    except EisenlatError as e:
        result.fail("constructed", f"{type(e).__name__}: {e}")
    result.status = PASS if not result.failures and all(v is not False for v in result.checks.values()) else FAIL
    result.seconds = time.monotonic() - started
    return result


def cmd_verify_tables(
    rows: list[CatalogRow],
    recipes: dict[str, GlueRecipe],
    only: set[tuple[int, int]] | None = None,
    group_order: bool = False,
    budget: float | None = None,
) -> VerificationReport:
    """Verification report over the catalog; rows without a construction are SKIPPED."""
    resolved = resolve_conjugates(rows)
    report = VerificationReport()
    for row in resolved:
        if only is not None and (row.rank, row.no) not in only:
            continue
        result = verify_row(row, rows, recipes, group_order, budget)
        if result.status != SKIPPED:
            icon = "✅" if result.status == PASS else "❌"
            logger.info(f"{icon} {row.rank}/{row.no} {result.status} ({result.seconds:.1f}s)")
            for msg in result.failures:
                logger.error(f"{row.rank}/{row.no}: {msg}")
        report.rows.append(result)
    return report
