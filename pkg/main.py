#!/usr/bin/env python3
"""
Single entry point for the limit amplituhedron toolkit
Combines classification, membership, verification suites and figure data into one CLI
"""

import argparse
import logging
import sys
from typing import List, Optional

from commands import COMMANDS
from commands.common import EXIT_FAILED, EXIT_PARSE, EXIT_RANK, CommandError
from config import Config
from exceptions import AmplituhedronError, DegenerateInputError, ParameterError
from run_config import RunConfigStore

logger = logging.getLogger("amplituhedron")

RUN_FLAGS = ("k", "mode", "seed", "samples", "tol_rank", "tol_root", "pole_radius", "workers", "out", "format")


def setup_logging(level: str = Config.LOG_LEVEL):
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=Config.LOG_FORMAT,
                        stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amplituhedron",
        description="Limit amplituhedron in Gr(k, k+2): strata, membership and verification suites",
    )
    parser.add_argument("--config", default=None, help="JSON file with run defaults")
    parser.add_argument("--log-level", default=Config.LOG_LEVEL)
    subparsers = parser.add_subparsers(dest="name", required=True)
    for module in COMMANDS:
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    store = RunConfigStore(args.config) if args.config else RunConfigStore()
    try:
        cfg = store.resolve({flag: getattr(args, flag, None) for flag in RUN_FLAGS})
    except ParameterError as e:
        logger.error(f"❌ {e}")
        return EXIT_PARSE

    try:
        return args.command(args, cfg)
    except CommandError as e:
        logger.error(f"❌ {e}")
        return e.code
    except ParameterError as e:
        logger.error(f"❌ {e}")
        return EXIT_PARSE
    except DegenerateInputError as e:
        logger.error(f"❌ {e}")
        return EXIT_RANK
    except AmplituhedronError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
