import argparse
import logging
from typing import Any, Dict, List, Sequence

from errors import EmptyBoundary, SizeLimit, ValidationError
from models.complex import SimplicialComplex
from models.invariants import RegularValue
from routers.base import CommandRouter, Report, arg, make_report
from services.config import TopologyConfig
from services.cover import pl_map, restrict_cover, subdivide_cover
from services.curves import hopf_invariant
from services.degree import degree
from services.fixtures import FIXTURE_NAMES, build
from services.formats import parse_inputs, serialize_complex, serialize_cover
from services.homology import homology
from services.obstruction import boundary_vertices, sperner_count
from services.simplicial import barycentric_subdivide, boundary_of
from utils.rational import format_rational

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["topology"])


def _point(values: Sequence) -> List[str]:
    return [format_rational(x) for x in values]


def _regular_value(value: RegularValue) -> Dict[str, Any]:
    return {"facet_index": value.facet_index, "point": _point(value.point), "attempt": value.attempt}


@router.command(
    "validate", "pseudomanifold checks and integral homology",
    arg("complex", help="complex file or fixture:NAME"),
    arg("--closed", action="store_true", help="reject complexes with boundary"),
)
def validate(args: argparse.Namespace) -> Report:
    M, _, _ = parse_inputs(args.complex, want_closed=args.closed)
    notes = []
    try:
        report = homology(M.complex)
        homology_section = {"betti": report.betti, "torsion": report.torsion}
        sphere = report.is_sphere_of_dimension(M.dimension)
    except SizeLimit as e:
        homology_section, sphere = None, None
        notes.append(e.message)
    return make_report(
        "validation",
        dimension=M.dimension,
        vertices=len(M.vertex_ids),
        facets=len(M.complex.facets),
        closed=M.is_closed,
        boundary_faces=len(M.boundary_faces),
        euler_characteristic=M.complex.euler_characteristic(),
        homology=homology_section,
        homology_sphere=sphere,
        notes=notes,
    )


@router.command(
    "subdivide", "barycentric subdivision of a complex and, optionally, its cover",
    arg("complex"),
    arg("cover", nargs="?"),
    arg("--times", type=int, default=1),
)
def subdivide(args: argparse.Namespace) -> Report:
    if args.times < 0:
        raise ValidationError("--times must be nonnegative", {"times": args.times})
    M, C, phi = parse_inputs(args.complex, args.cover)
    if C is None:
        return make_report("subdivision", complex=serialize_complex(barycentric_subdivide(M, args.times)), cover=None)
    M2, C2, phi2 = subdivide_cover(M, C, phi, args.times)
    return make_report("subdivision", complex=serialize_complex(M2), cover=serialize_cover(C2, phi2))


@router.command(
    "degree", "degree of the map induced by a cover",
    arg("complex"),
    arg("cover"),
)
def degree_command(args: argparse.Namespace) -> Report:
    M, C, phi = parse_inputs(args.complex, args.cover)
    result = degree(pl_map(M, C, phi), threads=args.threads)
    return make_report(
        "degree",
        degree=result.degree,
        regular_value=_regular_value(result.regular_value_used),
        preimages=[
            {"facet": list(p.facet), "barycentric": _point(p.barycentric), "sign": p.sign}
            for p in result.preimages
        ],
    )


@router.command(
    "hopf", "hopf invariant of a map from a 3-sphere with coordinates",
    arg("complex"),
    arg("cover"),
)
def hopf(args: argparse.Namespace) -> Report:
    M, C, phi = parse_inputs(args.complex, args.cover, want_closed=True)
    result = hopf_invariant(pl_map(M, C, phi), threads=args.threads)
    return make_report(
        "hopf",
        hopf_invariant=result.hopf_invariant,
        regular_values=[_regular_value(v) for v in result.regular_values],
        pole=_point(result.pole),
        projection_direction=_point(result.linking.direction),
        crossings=[
            {"segment_a": list(c.segment_a), "segment_b": list(c.segment_b), "a_over": c.a_over, "sign": c.sign}
            for c in result.linking.crossing_list
        ],
    )


@router.command(
    "sperner", "fully labeled facets of a triangulated simplex",
    arg("complex"),
    arg("cover", help="singleton labels, one per vertex"),
)
def sperner(args: argparse.Namespace) -> Report:
    T, labels, _ = parse_inputs(args.complex, args.cover)
    signed, unsigned = sperner_count(T, labels)
    if T.is_closed:
        raise EmptyBoundary("a triangulated simplex has boundary")
    A = boundary_of(T)
    rim = restrict_cover(labels, boundary_vertices(T))
    boundary_degree = degree(pl_map(A, rim), threads=args.threads).degree
    return make_report("sperner", signed=signed, unsigned=unsigned, boundary_degree=boundary_degree)


@router.command(
    "fixture", "write a shipped fixture",
    arg("name", choices=FIXTURE_NAMES),
    arg("--part", choices=["complex", "cover"], default="complex"),
)
def fixture(args: argparse.Namespace) -> Report:
    shipped = build(args.name)
    if args.part == "cover":
        if shipped["cover"] is None:
            raise ValidationError(f"fixture {args.name} ships no cover", {"fixture": args.name})
        return serialize_cover(shipped["cover"])
    complex_ = shipped["complex"]
    if isinstance(complex_, SimplicialComplex):
        # unoriented fixtures are written without orientation signs
        return {
            "schema_version": TopologyConfig.SCHEMA_VERSION,
            "kind": "complex",
            "dimension": complex_.dimension,
            "vertices": list(complex_.vertex_ids),
            "facets": [list(f) for f in complex_.facets],
        }
    return serialize_complex(complex_)
