"""figure: plot-ready data for the k = 1 region and the k = 2 strata inventory"""

import logging
from typing import Dict, List

import sympy as sp

from algebra_core import Mode, to_scalar
from amplituhedron import membership
from commands.common import EXIT_OK, EXIT_PARSE, CommandError, add_run_flags, emit
from config import Config
from exceptions import DegenerateInputError
from grassmann import as_mode, plane_from_primal
from run_config import RunConfig
from strata import K2_STRATA, classify, sample_stratum
from utils import derive_seed

logger = logging.getLogger(__name__)

FIGURES = ("pizza-slice", "k2-strata-counts")
GRID_WINDOW = (sp.Rational(-1, 4), sp.Rational(5, 4))


def register(subparsers):
    parser = subparsers.add_parser("figure", help="CSV data behind the figures")
    parser.add_argument("name", help=f"one of {', '.join(FIGURES)}")
    add_run_flags(parser)
    parser.set_defaults(command=run)


def pizza_slice_rows(resolution: int, seed: int, mode: Mode = Mode.EXACT,
                     tol_rank: float = Config.TAU_RANK, tol_root: float = Config.TAU_ROOT) -> List[Dict]:
    """Arc (t, t^2), chord (t, t) and a membership grid in the chart (1, x, y) of P^2"""
    rows = []
    steps = max(resolution, 2)
    for i in range(steps):
        t = sp.Rational(i, steps - 1)
        rows.append({"kind": "arc", "x": float(t), "y": float(t ** 2), "status": "boundary", "oracle": True})
        rows.append({"kind": "chord", "x": float(t), "y": float(t), "status": "boundary", "oracle": True})
    lo, hi = GRID_WINDOW
    for a in range(steps):
        for b in range(steps):
            x = lo + (hi - lo) * sp.Rational(a, steps - 1)
            y = lo + (hi - lo) * sp.Rational(b, steps - 1)
            try:
                V = plane_from_primal([[1, to_scalar(x, mode), to_scalar(y, mode)]], mode, tol_rank)
            except DegenerateInputError:
                continue
            verdict = membership(V, seed=derive_seed(seed, "pizza-slice", a, b), tol_rank=tol_rank, tol_root=tol_root)
            rows.append({
                "kind": "grid", "x": float(x), "y": float(y),
                "status": verdict.status.value,
                "oracle": bool(x ** 2 <= y <= x),
            })
    return rows


def strata_count_rows(seed: int, mode: Mode = Mode.EXACT, tol_rank: float = Config.TAU_RANK) -> List[Dict]:
    """One row per named k = 2 stratum, each witnessed by a classified sample planted exactly"""
    rows = []
    for name, spec in K2_STRATA:
        V = sample_stratum(spec, 2, derive_seed(seed, "k2-strata-counts", spec.key))
        label = classify(as_mode(V, mode, tol_rank), tol_rank)
        rows.append({
            "name": name,
            "ell": spec.ell, "i": spec.i, "j": spec.j,
            "line": spec.line, "segment": spec.segment,
            "codim": label.claimed_codim,
            "table_codim": label.table_codim,
            "dimension": 4 - label.claimed_codim,
            "witnessed": label.name == name,
        })
    return rows


def run(args, cfg: RunConfig) -> int:
    if args.name == "pizza-slice":
        rows = pizza_slice_rows(cfg.samples, cfg.seed, cfg.mode, cfg.tol_rank, cfg.tol_root)
    elif args.name == "k2-strata-counts":
        rows = strata_count_rows(cfg.seed, cfg.mode, cfg.tol_rank)
    else:
        raise CommandError(EXIT_PARSE, f"unknown figure {args.name!r}; choose from {', '.join(FIGURES)}")
    logger.info(f"📈 {args.name}: {len(rows)} rows")
    emit({"figure": args.name, "rows": rows}, cfg.model_copy(update={"format": "csv"}), rows)
    return EXIT_OK
