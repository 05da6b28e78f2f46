"""Tests for settings resolution and search-parameter presets."""

import pytest

from sfdesign.config import BUDGET_ENV_VAR, SearchParams, load_settings
from sfdesign.errors import ConfigError


class TestLoadSettings:
    def test_defaults(self):
        """Without file or environment the defaults apply."""
        settings = load_settings(environ={})
        assert settings.exact_budget == 20_000_000
        assert settings.max_iterations == 2000
        assert settings.initial_temperature is None

    def test_environment_budget(self):
        """The budget variable overrides the exact-enumeration budget."""
        assert load_settings(environ={BUDGET_ENV_VAR: "500"}).exact_budget == 500

    def test_file_with_comments(self, tmp_path):
        """key=value lines are read; comments and blank lines are skipped."""
        path = tmp_path / "sfdesign.conf"
        path.write_text("# presets\nmax_iterations = 50\n\nrestarts=4  # four chains\n")
        settings = load_settings(path, environ={})
        assert settings.max_iterations == 50
        assert settings.restarts == 4

    def test_environment_beats_file(self, tmp_path):
        path = tmp_path / "sfdesign.conf"
        path.write_text("exact_budget = 10\n")
        assert load_settings(path, environ={BUDGET_ENV_VAR: "99"}).exact_budget == 99

    def test_auto_temperature(self, tmp_path):
        """'auto' leaves the temperature to be picked from the data."""
        path = tmp_path / "sfdesign.conf"
        path.write_text("initial_temperature = auto\n")
        assert load_settings(path, environ={}).initial_temperature is None

    def test_unknown_key(self, tmp_path):
        """Misspelled keys are rejected."""
        path = tmp_path / "sfdesign.conf"
        path.write_text("max_iteration = 5\n")
        with pytest.raises(ConfigError):
            load_settings(path, environ={})

    def test_line_without_equals(self, tmp_path):
        """The error names the offending line."""
        path = tmp_path / "sfdesign.conf"
        path.write_text("restarts = 2\nworkers 3\n")
        with pytest.raises(ConfigError, match=":2:"):
            load_settings(path, environ={})

    def test_out_of_range(self, tmp_path):
        """A cooling factor must lie strictly between 0 and 1."""
        path = tmp_path / "sfdesign.conf"
        path.write_text("cooling_factor = 1.5\n")
        with pytest.raises(ConfigError):
            load_settings(path, environ={})


class TestSearchParams:
    def test_presets_and_overrides(self):
        """Explicit values win over presets; None falls back to them."""
        settings = load_settings(environ={})
        params = settings.search_params(seed=7, max_iterations=None, restarts=3)
        assert params == SearchParams(seed=7, restarts=3)

    def test_invalid_override(self):
        """Invalid overrides surface as configuration errors."""
        with pytest.raises(ConfigError):
            load_settings(environ={}).search_params(restarts=0)

    def test_frozen(self):
        """Parameters cannot be changed after validation."""
        params = SearchParams()
        with pytest.raises(Exception):
            params.seed = 3
