"""member: membership verdict and certificate for one plane"""

import logging

from amplituhedron import MembershipStatus, membership
from commands.common import EXIT_EXTERIOR, EXIT_OK, EXIT_UNDETERMINED, add_run_flags, emit, flatten, load_plane
from run_config import RunConfig

logger = logging.getLogger(__name__)

EXIT_CODES = {
    MembershipStatus.INTERIOR: EXIT_OK,
    MembershipStatus.BOUNDARY: EXIT_OK,
    MembershipStatus.EXTERIOR: EXIT_EXTERIOR,
    MembershipStatus.UNDETERMINED: EXIT_UNDETERMINED,
}


def register(subparsers):
    parser = subparsers.add_parser("member", help="is the plane in the limit amplituhedron")
    parser.add_argument("plane", help="file with k rows of k+2 rationals")
    parser.add_argument("--retries", type=int, default=None, help="extra random detour paths")
    add_run_flags(parser)
    parser.set_defaults(command=run)


def run(args, cfg: RunConfig) -> int:
    V = load_plane(args.plane, cfg)
    kwargs = {"seed": cfg.seed, "tol_rank": cfg.tol_rank, "tol_root": cfg.tol_root}
    if args.retries is not None:
        kwargs["retries"] = args.retries
    verdict = membership(V, **kwargs)
    report = {"k": V.k, "plane": V.to_strings(), **verdict.model_dump(mode="json")}
    logger.info(f"🔎 verdict: {verdict.status.value}")
    emit(report, cfg, [flatten({"k": V.k, "status": verdict.status.value,
                                "certificate": verdict.certificate.model_dump() if verdict.certificate else {}})])
    return EXIT_CODES[verdict.status]
