"""
eisenlat - Classification tables
Loading, conjugate resolution, lookup and lint of the shipped catalog
(rank-14 and rank-15 tables) and of the glue recipes.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from eisenlat.core.config import settings
from eisenlat.core.exceptions import ValidationError
from eisenlat.models.schemas import CatalogRow, GlueRecipe, parse_model_list, read_json
from eisenlat.services.roots import RootSystemDescriptor, expected_mu2, parse_descriptor

logger = logging.getLogger(__name__)

# rows per rank in the shipped tables
EXPECTED_COUNTS = {14: 58, 15: 259}


# ==================== factored orders ====================


def parse_order(text: str) -> int:
    """"2^24.3^6.5^2.7^2.11.13" -> integer."""
    s = text.strip().replace(" ", "").replace("·", ".").replace("*", ".")
    if not s:
        raise ValidationError("empty group order")
    value = 1
    for part in s.split("."):
        base, _, exp = part.partition("^")
        if not base.isdigit() or (exp and not exp.isdigit()):
            raise ValidationError(f"malformed group order {text!r}", [part])
        value *= int(base) ** (int(exp) if exp else 1)
    return value


def format_order(n: int) -> str:
    """Factored form with '.' between prime powers, e.g. 2^9.3^7.5.7."""
    if n < 1:
        raise ValueError(f"group orders are positive, got {n}")
    if n == 1:
        return "1"
    parts = []
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            parts.append(f"{p}^{e}" if e > 1 else str(p))
        p += 1 if p == 2 else 2
    if n > 1:
        parts.append(str(n))
    return ".".join(parts)


# ==================== loading ====================


def load_catalog(path: str | Path | None = None, expected: dict[int, int] | None = EXPECTED_COUNTS) -> list[CatalogRow]:
    """Read and validate the catalog; `expected=None` skips the row-count check."""
    path = Path(path) if path else settings.data_path("catalog.json")
    rows = parse_model_list(CatalogRow, read_json(path), f"catalog {path.name}")

    seen: set[tuple[int, int]] = set()
    dupes = []
    for row in rows:
        key = (row.rank, row.no)
        if key in seen:
            dupes.append(f"{row.rank}/{row.no}")
        seen.add(key)
    if dupes:
        raise ValidationError(f"duplicate catalog rows in {path.name}", dupes)

    if expected is not None:
        for rank, count in expected.items():
            have = sum(1 for r in rows if r.rank == rank)
            if have != count:
                raise ValidationError(f"rank {rank}: {have} rows, expected {count}", [rank])
    logger.debug(f"Loaded {len(rows)} catalog rows from {path}")
    return rows


def load_recipes(path: str | Path | None = None) -> dict[str, GlueRecipe]:
    path = Path(path) if path else settings.data_path("recipes.json")
    recipes = parse_model_list(GlueRecipe, read_json(path), f"recipes {path.name}")
    out: dict[str, GlueRecipe] = {}
    for r in recipes:
        if r.id in out:
            raise ValidationError(f"duplicate recipe id {r.id!r}", [r.id])
        out[r.id] = r
    return out


def resolve_conjugates(rows: list[CatalogRow]) -> list[CatalogRow]:
    """Conjugate rows inherit root system, |G| and mu2 from their partner."""
    by_key = {(r.rank, r.no): r for r in rows}
    out = []
    for r in rows:
        if r.conjugate_of is None:
            out.append(r)
            continue
        partner = by_key.get((r.rank, r.conjugate_of))
        if partner is None or partner.conjugate_of is not None:
            raise ValidationError(f"row {r.rank}/{r.no}: conjugate of missing row {r.conjugate_of}", [r.no])
        out.append(r.model_copy(update={
            "root_system": partner.root_system,
            "group_order": partner.group_order,
            "mu2": partner.mu2,
        }))
    return out


def find_row(rows: list[CatalogRow], rank: int, no: int) -> CatalogRow:
    for r in rows:
        if r.rank == rank and r.no == no:
            return r
    raise ValidationError(f"no catalog row {rank}/{no}")


def row_descriptor(row: CatalogRow) -> RootSystemDescriptor:
    if row.root_system is None:
        raise ValidationError(f"row {row.rank}/{row.no} has no root system; resolve conjugates first")
    return parse_descriptor(row.root_system)[0]


def match_rows(
    rows: list[CatalogRow],
    rank: int,
    mu2: int,
    descriptor: RootSystemDescriptor,
) -> list[CatalogRow]:
    """Rows (conjugates resolved) agreeing with the given invariants."""
    out = []
    for r in resolve_conjugates(rows):
        if r.rank != rank or r.mu2 != mu2:
            continue
        if row_descriptor(r) == descriptor:
            out.append(r)
    return out


def recipe_for(row: CatalogRow, rows: list[CatalogRow]) -> tuple[str | None, bool]:
    """(recipe id, conjugated) for a row; conjugate rows borrow their partner's recipe."""
    if row.conjugate_of is None:
        return row.recipe, False
    partner = find_row(rows, row.rank, row.conjugate_of)
    return partner.recipe, True


# ==================== lint ====================


@dataclass(frozen=True)
class LintFinding:
    rank: int
    no: int
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"rank": self.rank, "no": self.no, "code": self.code, "message": self.message}


def lint_catalog(rows: list[CatalogRow]) -> list[LintFinding]:
    """Consistency findings; these are warnings, not errors."""
    findings: list[LintFinding] = []
    keys = {(r.rank, r.no) for r in rows}

    def add(r: CatalogRow, code: str, message: str) -> None:
        findings.append(LintFinding(r.rank, r.no, code, message))

    for r in rows:
        if r.conjugate_of is not None:
            if r.conjugate_of == r.no:
                add(r, "self-conjugate", "row names itself as its complex conjugate")
            elif (r.rank, r.conjugate_of) not in keys:
                add(r, "dangling-conjugate", f"conjugate of missing row {r.conjugate_of}")
            continue
        assert r.root_system is not None and r.group_order is not None and r.mu2 is not None
        try:
            desc, flags = parse_descriptor(r.root_system)
        except ValidationError as e:
            add(r, "unparseable", str(e))
            continue
        if "bare-D" in flags:
            add(r, "bare-D", f"{r.root_system!r} has a D_n without parameter; read as D_n(sqrt-3)")
        if desc.total_rank > r.rank:
            add(r, "rank", f"root system rank {desc.total_rank} exceeds lattice rank {r.rank}")
        if expected_mu2(desc) != r.mu2:
            add(r, "mu2-mismatch", f"mu2 {r.mu2} but {desc} has {expected_mu2(desc)} roots")
        if r.mu2 % 6:
            add(r, "mu2-mod6", f"mu2 {r.mu2} is not divisible by 6")
        try:
            order = parse_order(r.group_order)
        except ValidationError as e:
            add(r, "unparseable", str(e))
            continue
        if order % 6:
            add(r, "order-mod6", f"|G| = {r.group_order} is not divisible by 6")

    for f in findings:
        logger.warning(f"⚠️ catalog {f.rank}/{f.no} [{f.code}] {f.message}")
    return findings
