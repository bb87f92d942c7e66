"""config: show, change or reset the stored run defaults"""

import json
import logging
from typing import Any, Dict, List

from commands.common import EXIT_FAILED, EXIT_OK, EXIT_PARSE, CommandError
from run_config import RunConfig, RunConfigStore

logger = logging.getLogger(__name__)

ACTIONS = ("show", "set", "reset")


def register(subparsers):
    parser = subparsers.add_parser("config", help="stored run defaults")
    parser.add_argument("action", choices=ACTIONS)
    parser.add_argument("assignments", nargs="*", metavar="KEY=VALUE", help="values for set")
    parser.set_defaults(command=run)


def parse_assignments(assignments: List[str]) -> Dict[str, Any]:
    """KEY=VALUE pairs; values are read as JSON when they parse, as plain strings otherwise"""
    updates = {}
    for item in assignments:
        key, sep, raw = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise CommandError(EXIT_PARSE, f"expected KEY=VALUE, got {item!r}")
        if key not in RunConfig.model_fields:
            raise CommandError(EXIT_PARSE, f"unknown setting {key!r}; choose from {', '.join(RunConfig.model_fields)}")
        try:
            updates[key] = json.loads(raw)
        except json.JSONDecodeError:
            updates[key] = raw
    return updates


def run(args, cfg: RunConfig) -> int:
    store = RunConfigStore(args.config) if args.config else RunConfigStore()
    if args.action == "set":
        if not args.assignments:
            raise CommandError(EXIT_PARSE, "config set needs at least one KEY=VALUE")
        if not store.update_config(parse_assignments(args.assignments)):
            return EXIT_FAILED
        logger.info(f"⚙️ updated {', '.join(a.partition('=')[0] for a in args.assignments)}")
    elif args.action == "reset":
        if not store.reset_to_defaults():
            return EXIT_FAILED
        logger.info("🔄 run defaults reset")
    print(json.dumps(store.stored_values(), indent=2, ensure_ascii=False))
    return EXIT_OK
