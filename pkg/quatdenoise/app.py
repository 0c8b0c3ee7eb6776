"""Command-line entry point: noise, denoise, approx, bench, metrics, replay."""

from __future__ import annotations

import argparse
import logging
import math
import shutil
from dataclasses import asdict
from pathlib import Path

from quatdenoise.bench import parse_size, run_benchmark, write_csv
from quatdenoise.config import DenoiseConfig, default_config_file, resolve_config
from quatdenoise.constants import (
    DEFAULT_SEED,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
)
from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.denoise.pipeline import denoise_image
from quatdenoise.errors import ConfigError, QuatDenoiseError
from quatdenoise.fileio.images import is_png, load_image, save_image, sidecar_path, write_qimg
from quatdenoise.fileio.manifest import RunManifest, manifest_path
from quatdenoise.fileio.qmat import read_qmat, write_qmat
from quatdenoise.lowrank.qbrp import BrpConfig, clqa_brp_detailed
from quatdenoise.metrics.noise import add_awgn
from quatdenoise.metrics.quality import QualityReport, psnr, quality_report
from quatdenoise.quaternion.matrix import frobenius_norm
from quatdenoise.quaternion.qsvd import truncated_qsvd
from quatdenoise.util.timing import StageTimer

logger = logging.getLogger(__name__)

# flag name -> DenoiseConfig field
_DENOISE_FLAGS = {
    "sigma": "sigma",
    "patch": "patch",
    "group": "group",
    "rank": "rank",
    "rounds": "rounds",
    "window": "window",
    "stride": "stride",
    "delta": "delta",
    "seed": "seed",
}


def _format_psnr(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def _same_file(a: str, b: str) -> bool:
    return Path(a).resolve() == Path(b).resolve()


# -- subcommands -------------------------------------------------------------

def cmd_add_noise(args: argparse.Namespace) -> int:
    timer = StageTimer()
    with timer.stage("read"):
        clean = load_image(args.input, use_sidecar=False)
    with timer.stage("noise"):
        noisy = add_awgn(clean, args.sigma, args.seed)
    with timer.stage("write"):
        if args.sigma == 0 and is_png(args.input) and not _same_file(args.input, args.output):
            # noise-free copy keeps the original PNG bytes
            shutil.copyfile(args.input, args.output)
            sidecar = sidecar_path(args.output)
            write_qimg(noisy, sidecar)
        else:
            sidecar = save_image(noisy, args.output, sidecar=True)

    value = psnr(clean, noisy)
    logger.info("Added noise sigma=%g seed=%d: PSNR %s dB", args.sigma, args.seed, _format_psnr(value))
    print(f"PSNR={_format_psnr(value)}")

    RunManifest(
        command="add-noise",
        argv=["add-noise", _abs(args.input), _abs(args.output),
              "--sigma", repr(float(args.sigma)), "--seed", str(args.seed)],
        seed=args.seed,
        config={"sigma": float(args.sigma)},
        inputs={"image": _abs(args.input)},
        outputs={"image": _abs(args.output), "sidecar": _abs(sidecar)},
        stage_seconds=timer.elapsed,
        metrics={"psnr": value},
    ).to_toml(manifest_path(args.output))
    return EXIT_OK


def cmd_denoise(args: argparse.Namespace) -> int:
    overrides = {field: getattr(args, flag) for flag, field in _DENOISE_FLAGS.items()}
    overrides["workers"] = args.workers
    config_file = Path(args.config) if args.config else default_config_file()
    run = resolve_config(config_file, overrides)
    cfg = run.denoise

    timer = StageTimer()
    with timer.stage("read"):
        noisy = load_image(args.input)
        reference = load_image(args.reference, use_sidecar=False) if args.reference else None

    round_psnr: list[float] = []

    def on_round(k: int, estimate: ColorImageQ) -> None:
        if reference is not None:
            value = psnr(reference, estimate.clipped())
            round_psnr.append(value)
            logger.info("Round %d PSNR %s dB", k, _format_psnr(value))

    with timer.stage("denoise"):
        output = denoise_image(noisy, cfg, workers=run.workers, on_round=on_round)
    with timer.stage("write"):
        save_image(output, args.output)

    metrics: dict[str, object] = {}
    if reference is not None:
        with timer.stage("metrics"):
            # scored on the stored 8-bit pixels
            report = quality_report(reference, ColorImageQ.from_rgb(output.to_uint8()))
        print(report.format_line())
        metrics = {"psnr": report.psnr, "ssim": report.ssim, "round_psnr": round_psnr}

    argv = ["denoise", _abs(args.input), _abs(args.output), *_config_argv(cfg), "--workers", "1"]
    inputs = {"image": _abs(args.input)}
    if args.reference:
        argv += ["--reference", _abs(args.reference)]
        inputs["reference"] = _abs(args.reference)
    RunManifest(
        command="denoise",
        argv=argv,
        seed=cfg.seed,
        config={**asdict(cfg), "workers": run.workers},
        inputs=inputs,
        outputs={"image": _abs(args.output)},
        stage_seconds=timer.elapsed,
        metrics=metrics,
    ).to_toml(manifest_path(args.output))
    logger.info("Denoised %s in %.2fs", args.output, timer.total)
    return EXIT_OK


def cmd_approx(args: argparse.Namespace) -> int:
    timer = StageTimer()
    with timer.stage("read"):
        y = read_qmat(args.input)
    norm = frobenius_norm(y)
    scale = norm if norm > 0.0 else 1.0

    with timer.stage("clqa_brp"):
        result = clqa_brp_detailed(y, BrpConfig(r=args.rank, T=args.iterations, seed=args.seed))
    write_qmat(result.X, args.output)
    brp_error = result.residual / scale
    logger.info("clqa_brp: effective rank %d, %d restart(s)", result.effective_r, result.restarts)

    outputs = {"qmat": _abs(args.output)}
    metrics: dict[str, object] = {"brp_error": brp_error, "effective_rank": result.effective_r}
    line = f"brp_error={brp_error:.6e}"
    if args.oracle:
        with timer.stage("truncated_qsvd"):
            oracle = truncated_qsvd(y, args.rank)
        oracle_path = Path(args.output).with_suffix(".oracle.qmat")
        write_qmat(oracle, oracle_path)
        oracle_error = frobenius_norm(y - oracle) / scale
        outputs["oracle"] = _abs(oracle_path)
        metrics["oracle_error"] = oracle_error
        line += f" oracle_error={oracle_error:.6e}"
    print(line)

    argv = ["approx", _abs(args.input), _abs(args.output), "--rank", str(args.rank),
            "--iterations", str(args.iterations), "--seed", str(args.seed)]
    if args.oracle:
        argv.append("--oracle")
    RunManifest(
        command="approx",
        argv=argv,
        seed=args.seed,
        config={"rank": args.rank, "iterations": args.iterations},
        inputs={"qmat": _abs(args.input)},
        outputs=outputs,
        stage_seconds=timer.elapsed,
        metrics=metrics,
    ).to_toml(manifest_path(args.output))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [parse_size(s) for s in args.sizes.split(",") if s.strip()]
    if not sizes:
        raise ConfigError("no benchmark sizes given")
    timer = StageTimer()
    with timer.stage("bench"):
        rows = run_benchmark(
            sizes, args.rank, repeats=args.repeats, seed=args.seed, oracle_repeats=args.oracle_repeats,
        )
    write_csv(rows, args.output)
    RunManifest(
        command="bench",
        argv=["bench", "--sizes", args.sizes, "--rank", str(args.rank),
              "--repeats", str(args.repeats), "--oracle-repeats", str(args.oracle_repeats),
              "--seed", str(args.seed), _abs(args.output)],
        seed=args.seed,
        config={"sizes": args.sizes, "rank": args.rank, "repeats": args.repeats,
                "oracle_repeats": args.oracle_repeats},
        outputs={"csv": _abs(args.output)},
        stage_seconds=timer.elapsed,
    ).to_toml(manifest_path(args.output))
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    ref = load_image(args.reference, use_sidecar=False)
    test = load_image(args.test, use_sidecar=False)
    report: QualityReport = quality_report(ref, test)
    print(report.format_line())
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    """Re-run the command recorded in a manifest."""
    manifest = RunManifest.from_toml(Path(args.manifest))
    if not manifest.argv or manifest.argv[0] == "replay":
        raise ConfigError(f"{args.manifest}: manifest records no replayable command")
    logger.info("Replaying %s from %s (recorded by version %s)",
                manifest.command, args.manifest, manifest.version)
    verbose = ["-v"] if args.verbose else []
    return main(verbose + list(manifest.argv))


# -- argument parsing --------------------------------------------------------

def _abs(path: str | Path | None) -> str:
    return str(Path(path).resolve()) if path is not None else ""


def _config_argv(cfg: DenoiseConfig) -> list[str]:
    argv = []
    for flag, field in _DENOISE_FLAGS.items():
        value = getattr(cfg, field)
        argv += [f"--{flag}", repr(value) if isinstance(value, float) else str(value)]
    return argv


def build_parser() -> argparse.ArgumentParser:
    from quatdenoise import __version__

    parser = argparse.ArgumentParser(
        prog="quatdenoise",
        description="Quaternion low-rank approximation and colour image denoising",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Enable verbose logging",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("add-noise", help="Add white Gaussian noise to an image")
    p.add_argument("input", help="Clean 8-bit RGB image")
    p.add_argument("output", help="Noisy PNG (a .qimg float sidecar is written next to it)")
    p.add_argument("--sigma", type=float, required=True, help="Noise standard deviation (8-bit scale)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_add_noise)

    p = sub.add_parser("denoise", help="Denoise a colour image")
    p.add_argument("input", help="Noisy image (PNG, or QIMGF1 float image)")
    p.add_argument("output", help="Output PNG")
    p.add_argument("--config", type=str, default=None, help="TOML file with a [denoise] table")
    p.add_argument("--sigma", type=float, default=None, help="Noise level, selects default w/n/r")
    p.add_argument("--patch", type=int, default=None, help="Patch side w")
    p.add_argument("--group", type=int, default=None, help="Patches per group n")
    p.add_argument("--rank", type=int, default=None, help="Target rank r")
    p.add_argument("--rounds", type=int, default=None, help="Denoising rounds K")
    p.add_argument("--window", type=int, default=None, help="Search window side")
    p.add_argument("--stride", type=int, default=None, help="Reference patch stride")
    p.add_argument("--delta", type=float, default=None, help="Iterative regularization weight")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None, help="Worker processes (1 = bit-exact)")
    p.add_argument("--reference", type=str, default=None, help="Clean image for PSNR/SSIM")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("approx", help="Rank-r approximation of a QMAT matrix")
    p.add_argument("input", help="QMAT file")
    p.add_argument("output", help="QMAT file for the approximation")
    p.add_argument("--rank", "-r", type=int, required=True)
    p.add_argument("--iterations", "-T", type=int, default=1, help="Independent sketches, best kept")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--oracle", action="store_true", help="Also compute the truncated QSVD")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("bench", help="Time clqa_brp against truncated QSVD")
    p.add_argument("output", help="CSV file")
    p.add_argument("--sizes", type=str, default="128,256,512", help="Comma list of N or MxN")
    p.add_argument("--rank", "-r", type=int, default=15)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--oracle-repeats", type=int, default=1, help="Repeats for the truncated QSVD")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("metrics", help="PSNR and SSIM between two images")
    p.add_argument("reference")
    p.add_argument("test")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("replay", help="Re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)

    return parser


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    return build_parser().parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    """Application entry point. Returns the process exit code."""
    try:
        args = parse_args(argv)
    except SystemExit as e:
        # --help/--version exit 0; usage errors exit 2 in argparse
        return EXIT_OK if e.code in (0, None) else EXIT_VALIDATION

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s [%(name)s] %(levelname)s: %(message)s",
        datefmt="%H:%M:%S",
    )

    try:
        return args.func(args)
    except QuatDenoiseError as e:
        logger.error("%s", e)
        return e.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
