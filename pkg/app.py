from __future__ import annotations

import argparse
import logging
import sys
import time
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence

from cli.commands import COMMANDS, SORT_KEYS, CommandContext
from services.report_service import ReportService
from utils.config import load_run_config, settings
from utils.errors import (
    ConfigError,
    DatasetError,
    GenerationError,
    InvariantViolation,
    UndefinedCorrelationError,
)

logger = logging.getLogger("fractackle")

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
DEFAULT_OUT = "out"

# flag -> campo di RunConfig
_OVERRIDES = {
    "data": "data_dir",
    "weeks": "weeks",
    "threshold": "threshold_d",
    "percentile": "percentile",
    "epsilon_peak": "epsilon_peak",
    "min_plays": "min_plays",
    "format": "output_format",
}


class _Parser(argparse.ArgumentParser):
    """Usage problems raise ConfigError so main() can still write a manifest."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(f"{self.prog}: {message}")


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat KEY=value run configuration file")
    common.add_argument("--data", help="directory with games/plays/players/tackles/tracking files")
    common.add_argument("--weeks", help="weeks to load, e.g. 1-9 or 1,3,5")
    common.add_argument("--out", default=DEFAULT_OUT, help="artifact directory (default: %(default)s)")
    common.add_argument("--threshold", type=float, help="contact distance D in yards; skips calibration")
    common.add_argument("--percentile", type=float, help="calibration percentile in (0, 1)")
    common.add_argument("--epsilon-peak", dest="epsilon_peak", type=float, help="degenerate peak guard, yd/s")
    common.add_argument("--min-plays", dest="min_plays", type=int, help="minimum plays for leaderboard rows")
    common.add_argument("--format", choices=("csv", "json"), help="table output format")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="fractackle", description="Fractional tackles from player tracking data.")
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True

    sub.add_parser("calibrate", parents=[common], help="calibrate the contact threshold D")
    sub.add_parser("windows", parents=[common], help="detect and value contact windows")
    sub.add_parser("credit", parents=[common], help="per-player credit for every window")

    board = sub.add_parser("leaderboard", parents=[common], help="defender leaderboard")
    board.add_argument("--top", type=int, default=None, help="keep the first N rows")
    board.add_argument("--sort", choices=SORT_KEYS, default="total")

    sub.add_parser("validate", parents=[common], help="correlation and split-period stability")

    export = sub.add_parser("export-play", parents=[common], help="velocity curve and credits of one play")
    export.add_argument("--game-id", dest="game_id", type=int, required=True)
    export.add_argument("--play-id", dest="play_id", type=int, required=True)

    synth = sub.add_parser("synth", parents=[common], help="write synthetic plays with a ground-truth sidecar")
    synth.add_argument("--seed", type=int, default=42)
    synth.add_argument("--plays", type=int, default=10)
    synth.add_argument("--out-dir", dest="out_dir", help="fixture directory (default: --out)")
    synth.add_argument("--include-example", dest="include_example", action="store_true",
                       help="also write the three-window worked example play")
    return parser


def _peek(argv: Sequence[str], flag: str, default: Optional[str] = None) -> Optional[str]:
    for i, token in enumerate(argv):
        if token == flag and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith(flag + "="):
            return token.split("=", 1)[1]
    return default


def _subcommand(argv: Sequence[str]) -> str:
    for token in argv:
        if token in COMMANDS:
            return token
    return "usage"


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    started_at = datetime.now(timezone.utc)
    started = time.perf_counter()

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        logger.error("%s", exc)
        report = ReportService(_peek(argv, "--out", DEFAULT_OUT), _subcommand(argv))
        report.write_manifest(status="usage_error", exit_code=EXIT_USAGE, started_at=started_at, error=str(exc))
        return EXIT_USAGE

    report = ReportService(args.out, args.command)
    ctx: Optional[CommandContext] = None
    status, code, error = "ok", EXIT_OK, None
    try:
        overrides: Dict[str, Any] = {
            field: getattr(args, flag) for flag, field in _OVERRIDES.items() if getattr(args, flag) is not None
        }
        config = load_run_config(args.config, overrides)
        report.output_format = config.output_format
        ctx = CommandContext(args=args, config=config, report=report)
        logger.info("Running %s with config %s", args.command, config.to_dict())
        COMMANDS[args.command](ctx)
    except ConfigError as exc:
        logger.error("Usage error: %s", exc)
        status, code, error = "usage_error", EXIT_USAGE, str(exc)
    except (DatasetError, UndefinedCorrelationError, GenerationError, FileNotFoundError) as exc:
        logger.error("Data error: %s", exc)
        status, code, error = "data_error", EXIT_DATA, str(exc)
    except InvariantViolation as exc:
        logger.exception("Internal invariant violated")
        status, code, error = "invariant_violation", EXIT_DATA, str(exc)
    except Exception as exc:
        # errori non gestiti -> exit 1, traceback completo nei log
        logger.exception("Unhandled exception")
        status, code, error = "error", EXIT_DATA, f"{type(exc).__name__}: {exc}"
    finally:
        timings: Dict[str, float] = dict(ctx.timings) if ctx else {}
        timings["total"] = round(time.perf_counter() - started, 6)
        inputs: List[Any] = list(ctx.inputs) if ctx else []
        try:
            report.write_manifest(
                status=status,
                exit_code=code,
                started_at=started_at,
                config=ctx.config.to_dict() if ctx else None,
                config_hash=ctx.config.config_hash() if ctx else None,
                timings=timings,
                inputs=inputs,
                row_counts=ctx.row_counts if ctx else None,
                extra=ctx.extra if ctx else None,
                error=error,
            )
        except OSError as exc:
            logger.error("Could not write manifest: %s", exc)
            code = code or EXIT_DATA
    return code


if __name__ == "__main__":
    sys.exit(main())
