from __future__ import annotations

import argparse
import logging
import sys
import tempfile
import time
from pathlib import Path
from typing import Any, List, Optional

from pydantic import ValidationError

from tankcodesign import __version__
from tankcodesign.cli.commands import COMMANDS, simulation_seeds
from tankcodesign.cli.outputs import (
    ERROR,
    MANIFEST,
    Artifacts,
    dump_json,
    error_document,
    manifest,
    write_csv,
    write_json,
)
from tankcodesign.cli.suite import run_reference_suite
from tankcodesign.config import load_run_config
from tankcodesign.errors import CoDesignError

logger = logging.getLogger(__name__)

FAILURES = (CoDesignError, ValidationError, ValueError, ArithmeticError, OSError)


def _volumes(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"expected comma-separated volumes, got {text!r}") from error


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of the `tankcodesign` command."""
    parser = argparse.ArgumentParser(
        prog="tankcodesign", description="Co-design of water tank size and price-threshold pumping."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Log INFO (-v) or DEBUG (-vv) messages.")
    parser.add_argument("--out", type=Path, default=Path("out"), help="Output directory.")
    parser.add_argument("--seed", type=int, default=None, help="Run seed, overriding the configuration.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads; 0 picks automatically.")
    parser.add_argument(
        "--candidates", type=_volumes, default=None, help="Comma-separated candidate tank volumes for codesign."
    )
    parser.add_argument("--iterations", type=int, default=None, help="SPSA iterations per restart.")
    parser.add_argument("--restarts", type=int, default=None, help="SPSA restarts.")
    parser.add_argument("--box", type=float, nargs=2, metavar=("LO", "HI"), default=None, help="SPSA threshold box.")
    parser.add_argument(
        "--reference-suite",
        action="store_true",
        help="Run the reference checks on the example configurations and print a pass/fail summary.",
    )
    parser.add_argument(
        "--config-dir", type=Path, default=Path("configs"), help="Example configurations for --reference-suite."
    )
    parser.add_argument("command", nargs="?", choices=sorted(COMMANDS), help="Task to run.")
    parser.add_argument("config", nargs="?", type=Path, help="JSON run configuration.")
    return parser


def _fail(out: Path, error: BaseException) -> int:
    document = error_document(error)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / ERROR, document)
    sys.stderr.write(dump_json(document))
    return 1


def run(
    command: str,
    config_path: Path,
    out: Path,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    **overrides: Any,
) -> int:
    """
    Run one task and write its artifacts and manifest under out.

    Artifacts are staged and only published when the task succeeds. On
    failure `error.json` is written instead and the exit code is 1.

    Args:
        command: Task name.
        config_path: JSON run configuration.
        out: Output directory.
        seed: Run seed override.
        threads: Worker thread override.
        **overrides: Further `RunConfig.with_overrides` arguments (candidates, iterations, restarts, box).

    Returns:
        Process exit code.
    """
    started = time.perf_counter()
    try:
        config = load_run_config(config_path).with_overrides(seed=seed, threads=threads, **overrides)
        out.mkdir(parents=True, exist_ok=True)
        (out / ERROR).unlink(missing_ok=True)
        with tempfile.TemporaryDirectory(dir=out, prefix=".staging-") as staging:
            artifacts = Artifacts(Path(staging))
            COMMANDS[command](config, artifacts)
            artifacts.publish(out)
    except FAILURES as error:
        logger.error("%s failed: %s", command, error)
        return _fail(out, error)

    seeds = {"run": config.seed, "spsa": config.seed, "simulation": simulation_seeds(config)}
    write_json(out / MANIFEST, manifest(command, config_path, seeds, config.threads, started, artifacts.names))
    logger.info("%s wrote %s", command, ", ".join(artifacts.names))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the `tankcodesign` command."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.reference_suite:
        try:
            threads = args.threads if args.threads is not None else 1
            frame = run_reference_suite(args.config_dir, args.seed or 0, threads)
        except FAILURES as error:
            return _fail(args.out, error)

        args.out.mkdir(parents=True, exist_ok=True)
        write_csv(args.out / "reference_suite.csv", frame)
        print(frame.to_string(index=False))
        print(f"{int(frame['passed'].sum())}/{len(frame)} checks passed")
        return 0 if bool(frame["passed"].all()) else 1

    if args.command is None or args.config is None:
        parser.error("a command and a configuration are required unless --reference-suite is given")

    box = tuple(args.box) if args.box is not None else None
    return run(
        args.command,
        args.config,
        args.out,
        args.seed,
        args.threads,
        candidates=args.candidates,
        iterations=args.iterations,
        restarts=args.restarts,
        box=box,
    )
