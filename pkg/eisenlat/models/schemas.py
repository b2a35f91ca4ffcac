"""
eisenlat - File schemas
Pydantic models for every JSON file the toolkit reads or writes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from eisenlat.core.exceptions import ValidationError
from eisenlat.models.eisenstein import EisRat, F4Elem

M = TypeVar("M", bound=BaseModel)


def _check_eisrat(value: str) -> str:
    EisRat.parse(value)
    return value


def _check_fraction_text(value: str) -> str:
    EisRat.parse(value).to_fraction()
    return value


# ==================== lattices ====================


class BlockFile(BaseModel):
    """One ambient block: {"orthonormal": n} or {"line": "9"}."""

    model_config = ConfigDict(extra="forbid")

    orthonormal: int | None = Field(default=None, gt=0)
    line: str | None = None

    @field_validator("line")
    @classmethod
    def _line_is_rational(cls, v: str | None) -> str | None:
        return None if v is None else _check_fraction_text(v)

    @model_validator(mode="after")
    def _exactly_one(self) -> BlockFile:
        if (self.orthonormal is None) == (self.line is None):
            raise ValueError("block needs exactly one of 'orthonormal' or 'line'")
        return self


class AmbientFile(BaseModel):
    blocks: list[BlockFile]
    form_scale: str = "1"

    @field_validator("form_scale")
    @classmethod
    def _scale_is_rational(cls, v: str) -> str:
        return _check_fraction_text(v)


class LatticeFile(BaseModel):
    """Lattice file: ambient space plus generator rows of EisRat strings."""

    ambient: AmbientFile
    generators: list[list[str]]
    name: str | None = None

    @field_validator("generators")
    @classmethod
    def _entries_parse(cls, rows: list[list[str]]) -> list[list[str]]:
        for row in rows:
            for x in row:
                _check_eisrat(x)
        return rows


# ==================== codes ====================


class CodeFile(BaseModel):
    length: int = Field(gt=0)
    generators: list[list[str]]
    name: str | None = None
    provenance: str | None = None

    @model_validator(mode="after")
    def _rows_fit(self) -> CodeFile:
        for row in self.generators:
            if len(row) != self.length:
                raise ValueError(f"code row has length {len(row)}, expected {self.length}")
            for x in row:
                F4Elem.parse(x)
        return self


# ==================== catalog and recipes ====================


class CatalogRow(BaseModel):
    """One row of the rank-14 / rank-15 classification tables."""

    rank: int
    no: int = Field(gt=0)
    root_system: str | None = None
    group_order: str | None = None
    mu2: int | None = Field(default=None, ge=0)
    recipe: str | None = None
    conjugate_of: int | None = None
    note: str | None = None

    @model_validator(mode="after")
    def _data_or_conjugate(self) -> CatalogRow:
        if self.conjugate_of is None and (self.root_system is None or self.group_order is None or self.mu2 is None):
            raise ValueError("row needs root_system, group_order and mu2 unless it is a conjugate")
        return self


class GlueTerm(BaseModel):
    block: int = Field(ge=0)
    coef: str = "1"
    vector: list[str]

    @field_validator("coef")
    @classmethod
    def _coef_parses(cls, v: str) -> str:
        return _check_eisrat(v)

    @field_validator("vector")
    @classmethod
    def _vector_parses(cls, v: list[str]) -> list[str]:
        for x in v:
            _check_eisrat(x)
        return v


class GlueRecipe(BaseModel):
    id: str
    rank: int
    row: int
    components: list[str] = Field(default_factory=list)
    lines: list[str] = Field(default_factory=list)
    glue: list[list[GlueTerm]] = Field(default_factory=list)
    code: str | None = None
    exterior_square: str | None = None
    notes: str | None = None

    @field_validator("lines")
    @classmethod
    def _lines_rational(cls, v: list[str]) -> list[str]:
        for x in v:
            _check_fraction_text(x)
        return v


# ==================== neighbor walk store ====================


class StoreEntry(BaseModel):
    fingerprint: str
    first_step: int
    mu2: int
    root_system: str
    lattice: LatticeFile
    catalog_rows: list[int] = Field(default_factory=list)
    undecided: bool = False


class StoreFile(BaseModel):
    seed: int | None = None
    steps: int = 0
    visits: list[int] = Field(default_factory=list)
    classes: list[StoreEntry] = Field(default_factory=list)
    terminated_early: bool = False


# ==================== helpers ====================


def parse_model(model: type[M], data: Any, what: str = "input") -> M:
    """Validate `data` against `model`, re-raising as the library's ValidationError."""
    try:
        return model.model_validate(data)
    except PydanticValidationError as e:
        offending = [".".join(str(p) for p in err["loc"]) for err in e.errors()]
        raise ValidationError(f"invalid {what}: {e.error_count()} problem(s)", offending) from e


def parse_model_list(model: type[M], data: Any, what: str = "input") -> list[M]:
    """Validate a JSON list row by row; the error lists every bad row index."""
    if not isinstance(data, list):
        raise ValidationError(f"invalid {what}: expected a JSON list")
    rows: list[M] = []
    bad: list[Any] = []
    for i, item in enumerate(data):
        try:
            rows.append(model.model_validate(item))
        except PydanticValidationError:
            bad.append(i)
    if bad:
        raise ValidationError(f"invalid {what}: {len(bad)} malformed row(s)", bad)
    return rows


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: not valid JSON ({e.msg} at line {e.lineno})") from e


def dump_json(data: Any) -> str:
    """Stable JSON text used for every emitted file."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
