import argparse
import logging

from errors import ValidationError
from models.search import LabelMode
from routers.base import CommandRouter, Report, arg, make_report
from services.classify import check_verdict, covers_cobordant, covers_homotopic, null_cobordance
from services.formats import (
    parse_certificate, parse_inputs, parse_verdict, read_document, serialize_verdict,
)
from services.obstruction import recheck_certificate

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["classify"])


@router.command(
    "homotopic", "decide whether two covers of one closed complex are homotopic",
    arg("complex"),
    arg("cover1"),
    arg("cover2"),
)
def homotopic(args: argparse.Namespace) -> Report:
    K, S1, _ = parse_inputs(args.complex, args.cover1, want_closed=True)
    _, S2, _ = parse_inputs(args.complex, args.cover2, want_closed=True)
    verdict = covers_homotopic(K, S1, S2, subdivide=args.subdivide, budget=args.budget, threads=args.threads)
    return serialize_verdict(verdict)


@router.command(
    "cobordant", "decide whether two (complex, cover) pairs are cobordant",
    arg("complex1"),
    arg("cover1"),
    arg("complex2", nargs="?"),
    arg("cover2", nargs="?"),
)
def cobordant(args: argparse.Namespace) -> Report:
    if (args.complex2 is None) != (args.cover2 is None):
        raise ValidationError("the second pair needs both a complex and a cover")
    M1, S1, _ = parse_inputs(args.complex1, args.cover1, want_closed=True)
    M2 = S2 = None
    if args.complex2 is not None:
        M2, S2, _ = parse_inputs(args.complex2, args.cover2, want_closed=True)
    verdict = covers_cobordant(
        M1, S1, M2, S2, threads=args.threads,
        subdivide=args.subdivide, budget=args.budget, label_mode=LabelMode(args.mode),
    )
    return serialize_verdict(verdict)


@router.command(
    "null-cobordant", "decide whether a cover is null-cobordant",
    arg("complex"),
    arg("cover"),
)
def null_cobordant(args: argparse.Namespace) -> Report:
    M, S, _ = parse_inputs(args.complex, args.cover, want_closed=True)
    verdict = null_cobordance(
        M, S, subdivide=args.subdivide, budget=args.budget, threads=args.threads,
        label_mode=LabelMode(args.mode),
    )
    return serialize_verdict(verdict)


@router.command(
    "recheck", "re-validate a certificate or witness verdict written by this tool",
    arg("report", help="certificate or verdict file"),
)
def recheck(args: argparse.Namespace) -> Report:
    document = read_document(args.report)
    kind = document.get("kind")
    if kind == "certificate":
        certificate = parse_certificate(document, args.report)
        recheck_certificate(certificate)
        verdict = certificate.verdict.value
    elif kind == "verdict":
        parsed = parse_verdict(document, args.report)
        check_verdict(parsed)
        verdict = parsed.relation.value
    else:
        raise ValidationError(
            f"{args.report}: cannot recheck documents of kind {kind!r}",
            {"file": args.report, "kind": kind}
        )
    logger.info(f"recheck of {args.report} passed")
    return make_report("recheck", checked=kind, verdict=verdict, valid=True)
