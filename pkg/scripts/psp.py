# scripts/psp.py

import sys
import logging
import argparse
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from domain.errors import EXIT_IO, EXIT_VALIDATION, ConfigValidationError, PspError
from domain.schemas import TimeWindow, parse_utc
from pipeline import runner
from pipeline.run_config import RunConfig, load_run_config
from processing.validator import validate_config
from reporting.summary import render_summary

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(message)s"
logger = logging.getLogger("psp")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        required=True,
        help="Run configuration (YAML)",
    )
    common.add_argument(
        "--window",
        default=None,
        help="Restrict posts to START..END (UTC, either side may be empty)",
    )
    common.add_argument(
        "--out",
        default=None,
        help="Output directory (overrides output_dir in the config)",
    )
    common.add_argument(
        "--clock",
        default=None,
        help="Fixed generation timestamp for reproducible manifests",
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="Warnings and errors only")

    parser = argparse.ArgumentParser(
        prog="psp",
        description="PSP risk assessment: social-signal tuned attack feasibility and financial model",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("analyze", parents=[common], help="Run the whole workflow")
    commands.add_parser("sai", parents=[common], help="Query posts and compute the SAI")
    tune = commands.add_parser("tune", parents=[common], help="Tune feasibility tables from sai.json")
    tune.add_argument("--scenario", default=None, help="Tune a single scenario")
    commands.add_parser("finance", parents=[common], help="Financial attack feasibility")
    commands.add_parser("validate", parents=[common], help="Report every config violation")

    keywords = commands.add_parser("keywords", help="Keyword DB maintenance")
    keyword_commands = keywords.add_subparsers(dest="keywords_command", required=True)
    keyword_commands.add_parser(
        "expand", parents=[common], help="Learn co-occurring hashtags from matches.parquet"
    )
    return parser


def configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


def load_checked_config(args: argparse.Namespace) -> RunConfig:
    diagnostics = validate_config(args.config)
    if diagnostics:
        for d in diagnostics:
            logger.error(f"config: {d}")
        raise ConfigValidationError(diagnostics)

    window: Optional[TimeWindow] = TimeWindow.parse(args.window) if args.window else None
    out = Path(args.out) if args.out else None
    return load_run_config(args.config).with_overrides(window=window, output_dir=out)


def generation_time(args: argparse.Namespace) -> datetime:
    if args.clock:
        return parse_utc(args.clock)
    return datetime.now(timezone.utc)


# ---------- Commands ----------

def cmd_validate(args: argparse.Namespace) -> int:
    diagnostics = validate_config(args.config)
    for d in diagnostics:
        print(d)
    if diagnostics:
        logger.error(f"{len(diagnostics)} violation(s) in {args.config}")
        return EXIT_VALIDATION
    logger.info(f"{args.config} is valid")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = load_checked_config(args)
    bundle = runner.run_analyze(cfg, generation_time(args))
    print(render_summary(bundle), end="")
    return 0


def cmd_sai(args: argparse.Namespace) -> int:
    cfg = load_checked_config(args)
    sai = runner.run_sai(cfg, generation_time(args))
    for rank, e in enumerate(sai, start=1):
        print(f"{rank:>2}. {e.scenario:<24} {e.raw_score:>10.3f}  p={e.probability:.3f}  "
              f"{e.attacker_class.value}")
    return 0


def cmd_tune(args: argparse.Namespace) -> int:
    cfg = load_checked_config(args)
    for t in runner.run_tune(cfg, generation_time(args), args.scenario):
        cells = ", ".join(f"{v.value}={r.value}" for v, r in t.tuned.ordered())
        print(f"{t.scenario} [{t.mode}] {cells}")
    return 0


def cmd_finance(args: argparse.Namespace) -> int:
    cfg = load_checked_config(args)
    for r in runner.run_finance(cfg, generation_time(args)):
        print(f"{r.scenario}: MV {r.market_value}, FC {r.fixed_cost}, BEP {r.break_even}, "
              f"max investment {r.max_adversary_investment}")
    return 0


def cmd_keywords_expand(args: argparse.Namespace) -> int:
    cfg = load_checked_config(args)
    added = runner.run_keywords_expand(cfg, generation_time(args))
    for k in added:
        print(f"#{k.tag} -> {k.scenario} (parent #{k.parent_tag})")
    if not added:
        print("no new keywords")
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "sai": cmd_sai,
    "tune": cmd_tune,
    "finance": cmd_finance,
    "validate": cmd_validate,
    "keywords": cmd_keywords_expand,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args)

    try:
        return COMMANDS[args.command](args)
    except PspError as exc:
        logger.error(str(exc))
        return exc.exit_code
    except OSError as exc:
        logger.error(f"I/O failure: {exc}")
        return EXIT_IO
    except ValueError as exc:
        # --window / --clock parsing
        logger.error(str(exc).splitlines()[0])
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
