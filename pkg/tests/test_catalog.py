"""
Tests for the shipped classification tables and their lint.
"""

import json

import pytest

from eisenlat.core.exceptions import ValidationError
from eisenlat.models.schemas import CatalogRow
from eisenlat.services.catalog import (
    EXPECTED_COUNTS,
    find_row,
    format_order,
    lint_catalog,
    load_catalog,
    match_rows,
    parse_order,
    recipe_for,
    resolve_conjugates,
    row_descriptor,
)
from eisenlat.services.roots import parse_descriptor


class TestOrders:
    """Tests for factored group orders."""

    def test_parse(self):
        """Test a table order."""
        assert parse_order("2^9.3^7.5.7") == 39191040

    def test_format(self):
        """Test that formatting factors the integer."""
        assert format_order(39191040) == "2^9.3^7.5.7"
        assert format_order(1) == "1"
        assert format_order(13) == "13"

    def test_round_trip(self, catalog_rows):
        """Test format(parse(x)) on every table order."""
        for r in catalog_rows:
            if r.group_order:
                assert parse_order(format_order(parse_order(r.group_order))) == parse_order(r.group_order)

    @pytest.mark.parametrize("text", ["", "x.3", "2^3^4", "2^-1"])
    def test_malformed(self, text):
        """Test that malformed orders raise ValidationError."""
        with pytest.raises(ValidationError):
            parse_order(text)


class TestLoadCatalog:
    """Tests for loading and validating the tables."""

    def test_row_counts(self, catalog_rows):
        """Test 58 rank-14 and 259 rank-15 rows."""
        for rank, count in EXPECTED_COUNTS.items():
            assert sum(1 for r in catalog_rows if r.rank == rank) == count

    def test_mu2_divisible_by_six(self, catalog_rows):
        """Test that every root count is a multiple of the six units."""
        assert all(r.mu2 % 6 == 0 for r in resolve_conjugates(catalog_rows))

    def test_wrong_count(self, tmp_path, catalog_rows):
        """Test that a truncated table is rejected with the rank named."""
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps([r.model_dump(exclude_none=True) for r in catalog_rows[:-1]]))
        with pytest.raises(ValidationError) as exc:
            load_catalog(path)
        assert exc.value.offending == [15]
        assert len(load_catalog(path, expected=None)) == len(catalog_rows) - 1

    def test_duplicates(self, tmp_path):
        """Test that duplicate (rank, no) keys are rejected."""
        row = {"rank": 14, "no": 1, "root_system": "empty", "group_order": "6", "mu2": 0}
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps([row, row]))
        with pytest.raises(ValidationError) as exc:
            load_catalog(path, expected=None)
        assert exc.value.offending == ["14/1"]

    def test_missing_data(self, tmp_path):
        """Test that a non-conjugate row without data fails schema validation."""
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps([{"rank": 14, "no": 1}]))
        with pytest.raises(ValidationError):
            load_catalog(path, expected=None)


class TestConjugates:
    """Tests for rows printed as complex conjugates."""

    def test_inherit_partner_data(self, catalog_rows):
        """Test that 14/14 takes its root system, |G| and mu2 from 14/13."""
        resolved = {(r.rank, r.no): r for r in resolve_conjugates(catalog_rows)}
        assert resolved[(14, 14)].root_system == resolved[(14, 13)].root_system
        assert resolved[(14, 14)].group_order == resolved[(14, 13)].group_order
        assert resolved[(14, 14)].mu2 == resolved[(14, 13)].mu2

    def test_recipe_is_borrowed(self, catalog_rows):
        """Test that a conjugate row uses its partner's recipe, conjugated."""
        assert recipe_for(find_row(catalog_rows, 14, 14), catalog_rows) == ("t2n13", True)
        assert recipe_for(find_row(catalog_rows, 14, 13), catalog_rows) == ("t2n13", False)

    def test_missing_partner(self):
        """Test that a conjugate of a missing row cannot be resolved."""
        with pytest.raises(ValidationError):
            resolve_conjugates([CatalogRow(rank=14, no=2, conjugate_of=1)])


class TestLookup:
    """Tests for finding rows by number or by invariants."""

    def test_find_row(self, catalog_rows):
        """Test lookup by (rank, no) and the error for a missing row."""
        assert find_row(catalog_rows, 14, 1).root_system == "D_14(2)"
        with pytest.raises(ValidationError):
            find_row(catalog_rows, 14, 59)

    def test_match_rows(self, catalog_rows):
        """Test that invariants pick out the first row."""
        matches = match_rows(catalog_rows, 14, 1092, parse_descriptor("D_14(2)")[0])
        assert [(r.rank, r.no) for r in matches] == [(14, 1)]

    def test_descriptor_needs_data(self, catalog_rows):
        """Test that an unresolved conjugate has no descriptor."""
        with pytest.raises(ValidationError):
            row_descriptor(find_row(catalog_rows, 14, 14))


class TestLint:
    """Tests for catalog consistency findings."""

    def test_shipped_catalog(self, catalog_rows):
        """Test that the bare D_4 in 15/102 is flagged, with the root count it implies."""
        findings = lint_catalog(catalog_rows)
        codes = {f.code for f in findings if (f.rank, f.no) == (15, 102)}
        assert {"bare-D", "mu2-mismatch"} <= codes
        assert not [f for f in findings if f.code in ("unparseable", "mu2-mod6", "self-conjugate")]

    def test_synthetic_findings(self):
        """Test each finding code on a hand-made row."""
        rows = [
            CatalogRow(rank=14, no=1, root_system="E_8", group_order="2^3", mu2=720),
            CatalogRow(rank=14, no=2, root_system="A_2", group_order="6", mu2=12),
            CatalogRow(rank=14, no=3, conjugate_of=3),
            CatalogRow(rank=14, no=4, conjugate_of=9),
            CatalogRow(rank=14, no=5, root_system="F_4", group_order="6", mu2=0),
            CatalogRow(rank=2, no=6, root_system="A_3", group_order="6", mu2=36),
        ]
        codes = {(f.no, f.code) for f in lint_catalog(rows)}
        assert (1, "order-mod6") in codes
        assert (2, "mu2-mismatch") in codes
        assert (3, "self-conjugate") in codes
        assert (4, "dangling-conjugate") in codes
        assert (5, "unparseable") in codes
        assert (6, "rank") in codes
