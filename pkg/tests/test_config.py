"""
Tests for settings.
"""

from pathlib import Path

from eisenlat.core.config import PROJECT_ROOT, Settings, get_settings


class TestSettings:
    """Tests for environment-driven configuration."""

    def test_defaults(self, monkeypatch):
        """Test the shipped defaults."""
        monkeypatch.delenv("EISENLAT_DATA", raising=False)
        s = Settings(_env_file=None)
        assert s.data_dir == PROJECT_ROOT / "data"
        assert s.threads == 1
        assert s.theta_prec == 8

    def test_environment(self, monkeypatch, tmp_path):
        """Test that EISENLAT_ variables override the defaults."""
        monkeypatch.setenv("EISENLAT_DATA", str(tmp_path))
        monkeypatch.setenv("EISENLAT_AUT_BUDGET", "12.5")
        monkeypatch.setenv("EISENLAT_THREADS", "4")
        s = Settings(_env_file=None)
        assert s.data_dir == tmp_path
        assert s.aut_budget == 12.5
        assert s.threads == 4

    def test_data_path(self, tmp_path):
        """Test paths under the data directory."""
        s = Settings(_env_file=None, data_dir=tmp_path)
        assert s.data_path("codes", "i2.json") == Path(tmp_path) / "codes" / "i2.json"

    def test_cached(self):
        """Test that get_settings returns one instance."""
        assert get_settings() is get_settings()

    def test_shipped_data_exists(self):
        """Test that the default data directory holds the tables."""
        s = Settings(_env_file=None)
        assert s.data_path("catalog.json").exists()
        assert s.data_path("recipes.json").exists()
