"""verify: run one suite, or all of them, and write the report"""

import logging

from commands.common import EXIT_FAILED, EXIT_OK, EXIT_PARSE, CommandError, add_run_flags, emit
from run_config import RunConfig
from verify import SUITE_NAMES, SuiteSettings, run_all, run_suite

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("verify", help="seeded verification suites")
    parser.add_argument("suite", help=f"one of {', '.join(SUITE_NAMES)}, or all")
    add_run_flags(parser)
    parser.set_defaults(command=run)


def _row(report) -> dict:
    return {
        "suite": report.suite, "k": report.k, "seed": report.seed, "samples": report.samples,
        "requested": report.requested, "completed": report.completed, "passed": report.passed,
        "failed": report.failed, "undetermined": report.undetermined, "ok": report.ok,
    }


def settings_of(cfg: RunConfig) -> SuiteSettings:
    return SuiteSettings(mode=cfg.mode, tol_rank=cfg.tol_rank, tol_root=cfg.tol_root, pole_radius=cfg.pole_radius)


def run(args, cfg: RunConfig) -> int:
    settings = settings_of(cfg)
    if args.suite == "all":
        reports = run_all(cfg.k, cfg.samples, cfg.seed, cfg.workers, settings)
        document = {"reports": [r.model_dump(mode="json") for r in reports]}
    elif args.suite in SUITE_NAMES:
        reports = [run_suite(args.suite, cfg.k, cfg.samples, cfg.seed, cfg.workers, settings)]
        document = reports[0].model_dump(mode="json")
    else:
        raise CommandError(EXIT_PARSE, f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)}, all")
    emit(document, cfg, [_row(r) for r in reports])
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILED
