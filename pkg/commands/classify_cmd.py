"""classify: stratum label, intersection divisor and both Chow forms of one plane"""

import logging

from algebra_core import format_scalar
from chowforms import chow_form_curve, chow_form_secant
from commands.common import EXIT_OK, add_run_flags, emit, flatten, load_plane
from run_config import RunConfig
from strata import classify, intersection_divisor

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("classify", help="stratum label of a plane given as a text grid")
    parser.add_argument("plane", help="file with k rows of k+2 rationals")
    add_run_flags(parser)
    parser.set_defaults(command=run)


def run(args, cfg: RunConfig) -> int:
    V = load_plane(args.plane, cfg)
    label = classify(V, cfg.tol_rank)
    divisor = intersection_divisor(V, cfg.tol_root)
    report = {
        "k": V.k,
        "mode": V.mode.value,
        "plane": V.to_strings(),
        "label": label.model_dump(),
        "divisor": divisor.describe(),
        "chow_forms": {
            "curve": format_scalar(chow_form_curve(V)),
            "secant": format_scalar(chow_form_secant(V)),
        },
    }
    logger.info(f"🏷️ k={V.k} ell={label.secant_degree} osc=({label.osc0},{label.osc1}) name={label.name}")
    emit(report, cfg, [flatten(report)])
    return EXIT_OK
