"""Tests for settings loading from the environment and .env files."""

from fractions import Fraction

import pytest

from app.config import Settings


class TestSettings:
    """Test the QSL_ environment prefix and the default domain."""

    def test_prefixed_environment(self, monkeypatch):
        monkeypatch.setenv("QSL_DEFAULT_ADDRS", "2")
        monkeypatch.setenv("QSL_LOOP_TOL", "1/100")
        cfg = Settings(_env_file=None).default_domain()
        assert cfg.addr_count == 2
        assert cfg.loop_tolerance == Fraction(1, 100)

    def test_unprefixed_names_are_not_read(self, monkeypatch):
        monkeypatch.setenv("DEFAULT_ADDRS", "7")
        assert Settings(_env_file=None).default_addrs == 3

    def test_env_file_ignores_unknown_keys(self, tmp_path):
        env = tmp_path / ".env"
        env.write_text("QSL_LAW_TRIALS=7\nSUPABASE_URL=http://localhost\n")
        settings = Settings(_env_file=str(env))
        assert settings.law_trials == 7
        assert settings.law_seed == 0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
