from pathlib import Path

import pytest

from quatdenoise.config import (
    DenoiseConfig,
    RunConfig,
    default_config_file,
    get_config_dir,
    resolve_config,
)
from quatdenoise.errors import ConfigError

NO_FLAGS = {"sigma": None, "patch": None, "group": None, "rank": None, "workers": None}


def write(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


def test_sigma_keyed_defaults():
    low = DenoiseConfig.for_sigma(50.0)
    assert (low.patch, low.group, low.rank) == (8, 120, 7)
    high = DenoiseConfig.for_sigma(70.0)
    assert (high.patch, high.group, high.rank) == (9, 140, 9)
    assert (low.rounds, low.delta, low.window, low.stride, low.seed) == (4, 0.1, 30, 4, 0)


@pytest.mark.parametrize(
    "changes",
    [
        {"sigma": -1.0},
        {"patch": 1},
        {"rank": 0},
        {"group": 5},
        {"rank": 70, "group": 200},
        {"window": 6},
        {"stride": 0},
        {"delta": 1.0},
        {"delta": -0.1},
        {"rounds": 0},
    ],
)
def test_validation(changes):
    cfg = DenoiseConfig.for_sigma(50.0)
    for key, value in changes.items():
        setattr(cfg, key, value)
    with pytest.raises(ConfigError):
        cfg.validate()


def test_defaults_without_file():
    run = resolve_config(None, NO_FLAGS)
    assert run.denoise == DenoiseConfig.for_sigma(50.0)
    assert run.workers == 1


def test_flag_sigma_rekeys_defaults():
    run = resolve_config(None, {**NO_FLAGS, "sigma": 70.0})
    assert (run.denoise.patch, run.denoise.group, run.denoise.rank) == (9, 140, 9)


def test_flags_override_file(tmp_path):
    path = write(tmp_path / "c.toml", "[denoise]\nsigma = 70.0\nrank = 5\nworkers = 2\n")
    run = resolve_config(path, NO_FLAGS)
    assert (run.denoise.sigma, run.denoise.patch, run.denoise.rank, run.workers) == (70.0, 9, 5, 2)
    run = resolve_config(path, {**NO_FLAGS, "rank": 15})
    assert run.denoise.rank == 15
    assert run.config_path == path


def test_bad_files(tmp_path):
    with pytest.raises(ConfigError, match="colour"):
        resolve_config(write(tmp_path / "a.toml", "[denoise]\ncolour = 1\n"), NO_FLAGS)
    with pytest.raises(ConfigError):
        resolve_config(write(tmp_path / "b.toml", "[denoise\n"), NO_FLAGS)
    with pytest.raises(ConfigError):
        resolve_config(None, {**NO_FLAGS, "workers": 0})


@pytest.mark.parametrize("line", ['rank = "7"', "patch = 4.5", "delta = true", 'sigma = "50"'])
def test_wrong_value_types(tmp_path, line):
    with pytest.raises(ConfigError, match="must be"):
        resolve_config(write(tmp_path / "t.toml", f"[denoise]\n{line}\n"), NO_FLAGS)


def test_integer_sigma_is_accepted(tmp_path):
    run = resolve_config(write(tmp_path / "s.toml", "[denoise]\nsigma = 50\n"), NO_FLAGS)
    assert run.denoise.sigma == 50.0
    assert isinstance(run.denoise.sigma, float)


def test_denoise_key_must_be_table(tmp_path):
    with pytest.raises(ConfigError, match="table"):
        resolve_config(write(tmp_path / "d.toml", "denoise = 3\n"), NO_FLAGS)


def test_toml_round_trip(tmp_path):
    run = RunConfig(denoise=DenoiseConfig.for_sigma(70.0), workers=3)
    run.denoise.seed = 11
    path = tmp_path / "out.toml"
    run.to_toml(path)
    loaded = RunConfig.from_toml(path)
    assert loaded.denoise == run.denoise
    assert loaded.workers == 3


def test_shipped_profiles_are_valid():
    profiles = Path(__file__).resolve().parent.parent / "profiles"
    for name, patch in (("sigma50.toml", 8), ("sigma70.toml", 9)):
        run = resolve_config(profiles / name, NO_FLAGS)
        assert run.denoise.patch == patch


def test_xdg_config_location(tmp_path, monkeypatch):
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path))
    assert get_config_dir() == tmp_path / "quatdenoise"
    assert default_config_file() is None
    (tmp_path / "quatdenoise").mkdir()
    write(tmp_path / "quatdenoise" / "config.toml", "[denoise]\nrank = 3\n")
    assert default_config_file() == tmp_path / "quatdenoise" / "config.toml"
