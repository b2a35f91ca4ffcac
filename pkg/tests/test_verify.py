"""
Tests for table verification.
"""

import pytest

from eisenlat.models.schemas import CatalogRow, GlueRecipe
from eisenlat.services.verify import FAIL, PASS, SKIPPED, cmd_verify_tables, verify_row

I2_RECIPES = {"lift-i2": GlueRecipe(id="lift-i2", rank=2, row=1, code="i2")}


def i2_row(**update) -> CatalogRow:
    data = {"rank": 2, "no": 1, "root_system": "empty", "group_order": "2^3.3^2", "mu2": 6, "recipe": "lift-i2"}
    data.update(update)
    return CatalogRow(**data)


class TestVerifyRow:
    """Tests for the checks run on one row."""

    def test_failures_are_reported(self):
        """Test that a decomposable lattice with the wrong mu2 fails with readable messages."""
        row = i2_row()
        result = verify_row(row, [row], I2_RECIPES)
        assert result.status == FAIL
        assert result.checks["unimodular"] is True
        assert result.checks["indecomposable"] is False
        assert "mu2 mismatch: got 36, expected 6" in result.failures

    def test_group_order_check(self):
        """Test that |G(I2)| = 72 is confirmed on request."""
        row = i2_row()
        result = verify_row(row, [row], I2_RECIPES, group_order=True)
        assert result.checks["group_order"] is True

    def test_rank_mismatch(self):
        """Test that a recipe of the wrong rank stops the checks early."""
        row = i2_row(rank=14)
        result = verify_row(row, [row], I2_RECIPES)
        assert result.status == FAIL
        assert result.failures == ["rank mismatch: got 2, expected 14"]

    def test_build_error(self):
        """Test that a failing construction is a FAIL, not an exception."""
        row = i2_row(recipe="missing")
        result = verify_row(row, [row], I2_RECIPES)
        assert result.status == FAIL
        assert result.checks["constructed"] is False

    def test_no_recipe(self):
        """Test that a row without construction is SKIPPED."""
        row = i2_row(recipe=None)
        assert verify_row(row, [row], I2_RECIPES).status == SKIPPED

    def test_timings(self):
        """Test that seconds only appear when asked for."""
        row = i2_row()
        result = verify_row(row, [row], I2_RECIPES)
        assert "seconds" not in result.to_dict()
        assert result.to_dict(timings=True)["seconds"] >= 0


class TestVerifyTables:
    """Tests for the report over the catalog."""

    def test_only_skipped_rows(self, catalog_rows, recipes):
        """Test that table-only rows are SKIPPED and keep the report ok."""
        report = cmd_verify_tables(catalog_rows, recipes, only={(15, 102), (15, 103)})
        assert report.counts() == {PASS: 0, FAIL: 0, SKIPPED: 2}
        assert report.ok
        assert report.to_dict()["ok"] is True

    @pytest.mark.slow
    def test_corrupted_mu2(self, catalog_rows, recipes):
        """Test that a wrong mu2 in the table is caught."""
        rows = [r.model_copy(update={"mu2": 90}) if (r.rank, r.no) == (14, 10) else r for r in catalog_rows]
        report = cmd_verify_tables(rows, recipes, only={(14, 10)})
        assert not report.ok
        assert "mu2 mismatch: got 84, expected 90" in report.rows[0].failures

    def test_first_rank14_row(self, catalog_rows, recipes):
        """Test that the D_14(2) row passes every check, decomposition included."""
        report = cmd_verify_tables(catalog_rows, recipes, only={(14, 1)})
        result = report.rows[0]
        assert result.status == PASS, result.failures
        assert result.checks["indecomposable"] is True
        assert result.checks["n3"] is True

    @pytest.mark.slow
    @pytest.mark.parametrize("key", [(14, 2), (14, 10), (14, 14)])
    def test_rank14_rows(self, catalog_rows, recipes, key):
        """Test that constructed rank-14 rows pass every check."""
        report = cmd_verify_tables(catalog_rows, recipes, only={key})
        assert report.rows[0].status == PASS, report.rows[0].failures

    @pytest.mark.slow
    def test_whole_catalog(self, catalog_rows, recipes):
        """Test every constructed row of the shipped tables."""
        report = cmd_verify_tables(catalog_rows, recipes)
        assert report.ok, [r.failures for r in report.rows if r.status == FAIL]
        assert report.counts()[PASS] >= 40
