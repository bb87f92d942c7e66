"""
Shared flags, plane loading and report output for the subcommands
"""

import csv
import io
import json
import logging
import sys
from typing import Any, Dict, List

from algebra_core import Mode
from exceptions import DegenerateInputError, DimensionError, InputParseError
from grassmann import KPlane, plane_from_primal
from run_config import RunConfig
from utils import parse_plane_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_EXTERIOR = 1
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_RANK = 3
EXIT_UNDETERMINED = 4


class CommandError(Exception):
    """Ends a subcommand with a specific exit code"""

    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def add_run_flags(parser):
    parser.add_argument("--k", type=int, help="plane dimension k (ambient space has dimension k+2)")
    parser.add_argument("--mode", choices=[m.value for m in Mode], help="exact rationals or floats")
    parser.add_argument("--seed", type=int, help="root seed for every random choice")
    parser.add_argument("--samples", type=int, help="sample budget")
    parser.add_argument("--tol-rank", type=float, dest="tol_rank")
    parser.add_argument("--tol-root", type=float, dest="tol_root")
    parser.add_argument("--pole-radius", type=float, dest="pole_radius")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="output file (stdout when omitted)")
    parser.add_argument("--format", choices=["json", "csv"])


def load_plane(path: str, cfg: RunConfig) -> KPlane:
    """Parse a k x (k+2) grid; parse problems map to exit 2, rank problems to exit 3"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            rows = parse_plane_text(f.read())
    except OSError as e:
        raise CommandError(EXIT_PARSE, f"cannot read {path}: {e}") from e
    except InputParseError as e:
        raise CommandError(EXIT_PARSE, f"{path}: {e}") from e
    try:
        return plane_from_primal(rows, cfg.mode, cfg.tol_rank)
    except (DegenerateInputError, DimensionError) as e:
        raise CommandError(EXIT_RANK, f"{path}: {e}") from e


def _csv_text(rows: List[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    if rows:
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buffer.getvalue()


def emit(document: Any, cfg: RunConfig, csv_rows: List[Dict[str, Any]] = None):
    """JSON document or CSV rows to --out, or stdout"""
    if cfg.format == "csv" and csv_rows is not None:
        text = _csv_text(csv_rows)
    else:
        text = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"📝 wrote {cfg.out}")
    else:
        sys.stdout.write(text)


def flatten(document: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Nested dict as one CSV row with dotted keys"""
    row = {}
    for key, value in document.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            row.update(flatten(value, f"{name}."))
        elif isinstance(value, list):
            row[name] = json.dumps(value)
        else:
            row[name] = value
    return row
