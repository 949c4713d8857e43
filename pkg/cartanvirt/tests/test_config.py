import math

import pytest
from pydantic import ValidationError

from app.core.config import Settings, get_settings
from app.core.serialization import dumps_stable, format_float
from app.dependencies import fd_config_from
from app.models.cli_config import CliConfig
from app.models.fd_config import FDConfig


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("CARTANVIRT_SEED", "CARTANVIRT_SAMPLES", "CARTANVIRT_LOG_LEVEL"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings(_env_file=None)
        assert settings.CARTANVIRT_SEED == 0
        assert settings.CARTANVIRT_SAMPLES == 100
        assert settings.CARTANVIRT_LOG_LEVEL == "WARNING"

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("CARTANVIRT_SEED", "42")
        get_settings.cache_clear()
        assert get_settings().CARTANVIRT_SEED == 42

    def test_cached(self):
        assert get_settings() is get_settings()


class TestFDConfigFrom:
    def test_flags_win(self, monkeypatch):
        monkeypatch.setenv("CARTANVIRT_SEED", "42")
        cfg = fd_config_from(CliConfig(command="verify", seed=5, samples=7))
        assert (cfg.seed, cfg.samples) == (5, 7)

    def test_environment_fallback(self, monkeypatch):
        monkeypatch.setenv("CARTANVIRT_SEED", "42")
        monkeypatch.setenv("CARTANVIRT_SAMPLES", "9")
        cfg = fd_config_from(CliConfig(command="verify"))
        assert (cfg.seed, cfg.samples) == (42, 9)

    def test_overrides(self):
        cli = CliConfig(command="curvature", fd_step=1e-3, tol_algebraic=1e-8, tol_fd=1e-4)
        cfg = fd_config_from(cli, Settings(_env_file=None))
        assert cfg.step == 1e-3
        assert cfg.tol_algebraic == 1e-8
        assert cfg.tol_fd == 1e-4
        assert cfg.second_step == FDConfig().second_step


class TestFDConfig:
    def test_defaults(self):
        cfg = FDConfig()
        assert cfg.step == 1e-4
        assert cfg.richardson is True
        assert cfg.tol_algebraic == 1e-9
        assert cfg.tol_fd == 1e-5

    @pytest.mark.parametrize("field,value", [
        ("step", 0.0),
        ("step", 1.0),
        ("samples", 0),
        ("tol_algebraic", 0.0),
        ("tol_fd", -1e-5),
        ("convergence_step", 0.5),
    ])
    def test_bounds(self, field, value):
        with pytest.raises(ValidationError):
            FDConfig(**{field: value})

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            FDConfig(stepsize=1e-4)

    def test_frozen(self):
        cfg = FDConfig()
        with pytest.raises(ValidationError):
            cfg.seed = 3


class TestSerialization:
    @pytest.mark.parametrize("value,expected", [
        (1.0, "1.0"),
        (0.1, "0.10000000000000001"),
        (0.5, "0.5"),
        (float("nan"), "NaN"),
        (-math.inf, "-Infinity"),
    ])
    def test_format_float(self, value, expected):
        assert format_float(value) == expected

    def test_key_order_preserved(self):
        text = dumps_stable({"b": 1, "a": [True, None, 2.5]})
        assert text.index('"b"') < text.index('"a"')
        assert "true" in text and "null" in text

    def test_rejects_objects(self):
        with pytest.raises(TypeError):
            dumps_stable({"x": object()})
