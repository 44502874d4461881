import argparse
import logging
from typing import Tuple

from errors import CoverbordError, ValidationError
from models.search import ExtensionProblem, LabelMode
from routers.base import CommandRouter, Report, arg, make_report
from services.cover import restrict_cover
from services.formats import load_complex, load_cover, serialize_certificate, serialize_cover
from services.obstruction import boundary_vertices, find_extension, make_problem, subdivide_problem, verify_kkm

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["search"])


def load_problem(args: argparse.Namespace) -> ExtensionProblem:
    """Ambient complex plus a cover of (at least) its boundary vertices"""
    X = load_complex(args.complex)
    cover, _ = load_cover(args.cover)
    rim = boundary_vertices(X)
    missing = [v for v in rim if v not in cover.labels]
    if missing:
        raise ValidationError(
            f"{args.cover}: boundary vertex {missing[0]} has no labels",
            {"file": args.cover, "vertex": missing[0]}
        )
    try:
        problem = make_problem(X, restrict_cover(cover, rim), LabelMode(args.mode))
    except CoverbordError as e:
        e.detail.setdefault("file", args.cover)
        raise
    if args.subdivide:
        problem = subdivide_problem(problem, args.subdivide)
    logger.info(f"extension problem with {len(problem.free_vertices)} free vertices, mode {problem.label_mode.value}")
    return problem


PROBLEM_ARGUMENTS: Tuple = (
    arg("complex", help="ambient complex with boundary"),
    arg("cover", help="labels for the boundary vertices; interior labels are ignored"),
)


@router.command("kkm-verify", "exhaustive search for an extension without covering simplex", *PROBLEM_ARGUMENTS)
def kkm_verify(args: argparse.Namespace) -> Report:
    certificate = verify_kkm(load_problem(args), budget=args.budget, threads=args.threads)
    return serialize_certificate(certificate, timing=args.timing)


@router.command("kkm-extend", "first extension in search order, if any", *PROBLEM_ARGUMENTS)
def kkm_extend(args: argparse.Namespace) -> Report:
    witness = find_extension(load_problem(args), budget=args.budget, threads=args.threads)
    return make_report(
        "extension",
        extendable=witness is not None,
        witness=serialize_cover(witness) if witness is not None else None,
    )
