import csv
import math

import numpy as np
import pytest
from PIL import Image

from quatdenoise import app
from quatdenoise.fileio.manifest import RunManifest
from quatdenoise.fileio.qmat import read_qmat, write_qmat
from quatdenoise.quaternion.matrix import random_gaussian_qmatrix, random_lowrank_qmatrix

from conftest import smooth_image

SMALL = ["--patch", "4", "--group", "16", "--rank", "2", "--window", "12", "--stride", "4", "--rounds", "2"]


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))


def save_rgb(path, rgb):
    Image.fromarray(rgb, mode="RGB").save(path)
    return path


def load_rgb(path):
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))


@pytest.fixture
def clean_png(tmp_path):
    return save_rgb(tmp_path / "clean.png", smooth_image(24, 24).to_uint8())


def test_add_noise_zero_sigma_copies_pixels(tmp_path, clean_png, capsys):
    out = tmp_path / "noisy.png"
    assert app.main(["add-noise", str(clean_png), str(out), "--sigma", "0"]) == 0
    assert out.read_bytes() == clean_png.read_bytes()
    assert "PSNR=inf" in capsys.readouterr().out
    assert (tmp_path / "noisy.qimg").is_file()
    assert (tmp_path / "noisy.manifest.toml").is_file()


def test_add_noise_reports_psnr(tmp_path, clean_png, capsys):
    out = tmp_path / "noisy.png"
    assert app.main(["add-noise", str(clean_png), str(out), "--sigma", "50", "--seed", "42"]) == 0
    value = float(capsys.readouterr().out.strip().split("=")[1])
    assert value == pytest.approx(20 * math.log10(255 / 50), abs=0.5)
    manifest = RunManifest.from_toml(tmp_path / "noisy.manifest.toml")
    assert manifest.seed == 42
    assert manifest.command == "add-noise"


def test_missing_input_is_io_error(tmp_path, caplog):
    missing = tmp_path / "missing.png"
    assert app.main(["add-noise", str(missing), str(tmp_path / "o.png"), "--sigma", "5"]) == 2
    assert "missing.png" in caplog.text


def test_metrics_identical_and_offset(tmp_path, capsys):
    rgb = (smooth_image(24, 32).to_uint8() // 2 + 5).astype(np.uint8)
    ref = save_rgb(tmp_path / "ref.png", rgb)
    shifted = save_rgb(tmp_path / "shifted.png", (rgb + 5).astype(np.uint8))
    assert app.main(["metrics", str(ref), str(ref)]) == 0
    assert capsys.readouterr().out.strip() == "PSNR=inf SSIM=1.000000"
    assert app.main(["metrics", str(ref), str(shifted)]) == 0
    assert capsys.readouterr().out.startswith("PSNR=34.1514 SSIM=")


def test_metrics_size_mismatch(tmp_path):
    a = save_rgb(tmp_path / "a.png", smooth_image(24, 24).to_uint8())
    b = save_rgb(tmp_path / "b.png", smooth_image(24, 32).to_uint8())
    assert app.main(["metrics", str(a), str(b)]) == 3


def test_denoise_with_reference_and_replay(tmp_path, clean_png, capsys):
    noisy = tmp_path / "noisy.png"
    out = tmp_path / "out.png"
    assert app.main(["add-noise", str(clean_png), str(noisy), "--sigma", "30", "--seed", "1"]) == 0
    capsys.readouterr()
    args = ["denoise", str(noisy), str(out), "--sigma", "30", *SMALL, "--reference", str(clean_png)]
    assert app.main(args) == 0
    assert capsys.readouterr().out.startswith("PSNR=")

    manifest = RunManifest.from_toml(tmp_path / "out.manifest.toml")
    assert manifest.config["rank"] == 2
    assert manifest.config["patch"] == 4
    assert len(manifest.metrics["round_psnr"]) == 2
    first = load_rgb(out)

    out.unlink()
    assert app.main(["replay", str(tmp_path / "out.manifest.toml")]) == 0
    np.testing.assert_array_equal(load_rgb(out), first)


def test_denoise_without_reference_prints_nothing(tmp_path, clean_png, capsys):
    out = tmp_path / "out.png"
    assert app.main(["denoise", str(clean_png), str(out), *SMALL, "--rank", "3"]) == 0
    assert capsys.readouterr().out == ""
    manifest = RunManifest.from_toml(tmp_path / "out.manifest.toml")
    assert manifest.config["rank"] == 3
    assert manifest.metrics == {}


def test_denoise_rejects_bad_config_before_reading(tmp_path):
    args = ["denoise", str(tmp_path / "absent.png"), str(tmp_path / "o.png"), "--rank", "200"]
    assert app.main(args) == 3


def test_denoise_config_with_wrong_type_exits_validation(tmp_path):
    config = tmp_path / "c.toml"
    config.write_text('[denoise]\nrank = "7"\n')
    args = ["denoise", str(tmp_path / "absent.png"), str(tmp_path / "o.png"), "--config", str(config)]
    assert app.main(args) == 3


def test_denoise_reads_config_file(tmp_path, clean_png):
    config = tmp_path / "c.toml"
    config.write_text("[denoise]\npatch = 4\ngroup = 16\nrank = 2\nwindow = 12\nrounds = 1\n")
    out = tmp_path / "out.png"
    assert app.main(["denoise", str(clean_png), str(out), "--config", str(config)]) == 0
    manifest = RunManifest.from_toml(tmp_path / "out.manifest.toml")
    assert manifest.config["rounds"] == 1


def test_approx_exact_and_oracle(tmp_path, capsys):
    low = tmp_path / "low.qmat"
    write_qmat(random_lowrank_qmatrix(20, 14, 3, seed=2), low)
    assert app.main(["approx", str(low), str(tmp_path / "x.qmat"), "--rank", "3"]) == 0
    line = capsys.readouterr().out.strip()
    assert float(line.split("=")[1]) <= 1e-8
    assert read_qmat(tmp_path / "x.qmat").shape == (20, 14)

    full = tmp_path / "full.qmat"
    write_qmat(random_gaussian_qmatrix(12, 10, seed=3), full)
    assert app.main(["approx", str(full), str(tmp_path / "y.qmat"), "--rank", "3", "--oracle"]) == 0
    fields = dict(item.split("=") for item in capsys.readouterr().out.split())
    assert float(fields["brp_error"]) >= float(fields["oracle_error"]) * (1 - 1e-9)
    assert (tmp_path / "y.oracle.qmat").is_file()


def test_approx_errors(tmp_path):
    path = tmp_path / "q.qmat"
    write_qmat(random_gaussian_qmatrix(4, 3, seed=0), path)
    assert app.main(["approx", str(path), str(tmp_path / "o.qmat"), "--rank", "4"]) == 3
    bad = tmp_path / "bad.qmat"
    bad.write_bytes(b"NOPE")
    assert app.main(["approx", str(bad), str(tmp_path / "o.qmat"), "--rank", "1"]) == 2


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    assert app.main(["bench", str(out), "--sizes", "12,16x10", "--rank", "2", "--repeats", "1"]) == 0
    with open(out, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["M", "N", "r", "method", "median_seconds", "error"]
    assert len(rows) == 5
    assert {r[3] for r in rows[1:]} == {"clqa_brp", "truncated_qsvd"}
    assert rows[3][:2] == ["16", "10"]


def test_usage_errors():
    assert app.main(["approx"]) == 3
    assert app.main(["--version"]) == 0
