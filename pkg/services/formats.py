"""
JSON file formats for complexes, covers, certificates and verdicts.

Rationals are written as "p/q" strings in lowest terms (integers as "p");
documents are dumped with sorted keys and a two-space indent so identical
inputs give byte-identical reports.
"""
import json
import logging
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from errors import CoverbordError, HasBoundary, ParseError, ValidationError
from models.complex import GeometricRealization, OrientedPseudomanifold, SimplicialComplex
from models.cover import Cover, PartitionOfUnity
from models.files import CertificateFile, ComplexFile, CoverFile, VerdictFile, WitnessFile
from models.search import Certificate, ExtensionProblem, LabelMode, PrunedBranch, SearchStats, SearchVerdict
from models.verdict import Basis, BoundaryPiece, ClassificationVerdict, Relation, Witness, WitnessKind
from services.config import TopologyConfig
from services.cover import check_cover, check_partition
from services.simplicial import build_complex, facet_signs, validate_pseudomanifold
from utils.rational import format_rational, parse_rational, permutation_parity

logger = logging.getLogger(__name__)

FIXTURE_PREFIX = "fixture:"

ModelT = TypeVar("ModelT", bound=BaseModel)


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def read_document(path: str) -> Dict[str, Any]:
    """Load a JSON document, reporting IO and syntax errors with their location"""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", {"file": path})
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"{path}:{e.lineno}:{e.colno}: {e.msg}",
            {"file": path, "line": e.lineno, "column": e.colno}
        )
    if not isinstance(document, dict):
        raise ParseError(f"{path}: top level must be an object", {"file": path})
    return document


def validate_model(model: Type[ModelT], data: Dict[str, Any], source: str) -> ModelT:
    """pydantic validation with errors turned into our ValidationError"""
    try:
        return model.model_validate(data)
    except PydanticValidationError as e:
        problems = [
            {"field": ".".join(str(part) for part in err["loc"]), "message": err["msg"]}
            for err in e.errors()
        ]
        first = problems[0]
        raise ValidationError(
            f"{source}: {first['field']}: {first['message']}",
            {"file": source, "errors": problems}
        )


def _rational(text: str, source: str, where: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise ParseError(f"{source}: {where}: {str(e)}", {"file": source, "field": where})


# Complexes

def parse_complex(data: ComplexFile, source: str = "<complex>") -> OrientedPseudomanifold:
    listed = [tuple(f) for f in data.facets]
    K = build_complex(listed)
    if K.dimension != data.dimension:
        raise ValidationError(
            f"{source}: dimension {data.dimension} does not match facets of dimension {K.dimension}",
            {"file": source, "dimension": data.dimension}
        )
    if sorted(set(data.vertices)) != list(K.vertex_ids) or len(set(data.vertices)) != len(data.vertices):
        raise ValidationError(
            f"{source}: vertex list differs from the vertices of the facets",
            {"file": source, "unused": sorted(set(data.vertices) - set(K.vertex_ids)),
             "undeclared": sorted(set(K.vertex_ids) - set(data.vertices))}
        )

    orientation = None
    if data.orientation is not None:
        if len(data.orientation) != len(listed) or any(s not in (1, -1) for s in data.orientation):
            raise ValidationError(
                f"{source}: orientation needs one sign (+1 or -1) per facet",
                {"file": source}
            )
        by_facet = {tuple(sorted(f)): s * permutation_parity(f) for f, s in zip(listed, data.orientation)}
        orientation = [by_facet[f] for f in K.facets]

    realization = None
    if data.coordinates is not None:
        missing = [v for v in K.vertex_ids if v not in data.coordinates]
        if missing:
            raise ValidationError(
                f"{source}: vertex {missing[0]} has no coordinates",
                {"file": source, "vertex": missing[0]}
            )
        points = {
            v: tuple(_rational(x, source, f"coordinates.{v}") for x in data.coordinates[v])
            for v in K.vertex_ids
        }
        if len({len(p) for p in points.values()}) != 1:
            raise ValidationError(f"{source}: coordinates have mixed lengths", {"file": source})
        realization = GeometricRealization(coordinates=points)

    try:
        M = validate_pseudomanifold(K, want_closed=data.closed, orientation=orientation, realization=realization)
    except CoverbordError as e:
        e.detail.setdefault("file", source)
        raise
    if data.carriers is not None:
        M = M.model_copy(update={"carriers": {v: tuple(c) for v, c in data.carriers.items()}})
    return M


def serialize_complex(M: OrientedPseudomanifold) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "schema_version": TopologyConfig.SCHEMA_VERSION,
        "kind": "complex",
        "dimension": M.dimension,
        "vertices": list(M.vertex_ids),
        "facets": [list(f) for f in M.complex.facets],
        "orientation": facet_signs(M),
        "closed": M.is_closed,
    }
    if M.realization is not None:
        document["coordinates"] = {
            str(v): [format_rational(x) for x in M.realization.coordinates[v]] for v in M.vertex_ids
        }
    if M.carriers is not None:
        document["carriers"] = {str(v): list(c) for v, c in sorted(M.carriers.items())}
    return document


# Covers

def parse_cover(data: CoverFile, source: str = "<cover>") -> Tuple[Cover, Optional[PartitionOfUnity]]:
    cover = Cover(num_sets=data.num_sets, labels={v: tuple(ls) for v, ls in data.labels.items()})
    phi = None
    if data.weights is not None:
        phi = PartitionOfUnity(weights={
            v: tuple(_rational(x, source, f"weights.{v}") for x in w) for v, w in data.weights.items()
        })
    return cover, phi


def serialize_cover(C: Cover, phi: Optional[PartitionOfUnity] = None) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "schema_version": TopologyConfig.SCHEMA_VERSION,
        "kind": "cover",
        "num_sets": C.num_sets,
        "labels": {str(v): list(ls) for v, ls in sorted(C.labels.items())},
    }
    if phi is not None:
        document["weights"] = {
            str(v): [format_rational(x) for x in w] for v, w in sorted(phi.weights.items())
        }
    return document


def load_complex(path: str, want_closed: bool = False) -> OrientedPseudomanifold:
    """A complex file, or a shipped fixture named as "fixture:NAME" """
    if path.startswith(FIXTURE_PREFIX):
        from services.fixtures import build
        shipped = build(path[len(FIXTURE_PREFIX):])["complex"]
        if isinstance(shipped, SimplicialComplex):
            return validate_pseudomanifold(shipped, want_closed=want_closed)
        if want_closed and not shipped.is_closed:
            raise HasBoundary(f"fixture {path} has boundary", {"file": path})
        return shipped
    M = parse_complex(validate_model(ComplexFile, read_document(path), path), path)
    if want_closed and not M.is_closed:
        raise HasBoundary(f"{path}: complex has {len(M.boundary_faces)} boundary faces", {"file": path})
    return M


def load_cover(path: str) -> Tuple[Cover, Optional[PartitionOfUnity]]:
    if path.startswith(FIXTURE_PREFIX):
        from services.fixtures import build
        cover = build(path[len(FIXTURE_PREFIX):])["cover"]
        if cover is None:
            raise ValidationError(f"fixture {path} ships no cover", {"file": path})
        return cover, None
    return parse_cover(validate_model(CoverFile, read_document(path), path), path)


def parse_inputs(complex_path: str, cover_path: Optional[str] = None, want_closed: bool = False
                 ) -> Tuple[OrientedPseudomanifold, Optional[Cover], Optional[PartitionOfUnity]]:
    """Load and cross-validate a complex and, optionally, a cover on it"""
    M = load_complex(complex_path, want_closed)
    if cover_path is None:
        return M, None, None
    cover, phi = load_cover(cover_path)
    try:
        check_cover(M.complex, cover)
        if phi is not None:
            check_partition(cover, phi, M.vertex_ids)
    except CoverbordError as e:
        e.detail.setdefault("file", cover_path)
        e.message = f"{cover_path}: {e.message}"
        e.args = (e.message,)
        raise
    logger.info(f"loaded {complex_path} ({len(M.complex.facets)} facets) and {cover_path}")
    return M, cover, phi


# Certificates

def serialize_certificate(certificate: Certificate, timing: bool = False) -> Dict[str, Any]:
    """Elapsed time is left out unless asked for, keeping reports deterministic"""
    problem = certificate.problem
    stats = certificate.stats.model_dump()
    if not timing:
        stats.pop("elapsed_seconds", None)
    return {
        "schema_version": TopologyConfig.SCHEMA_VERSION,
        "kind": "certificate",
        "verdict": certificate.verdict.value,
        "problem": {
            "ambient": serialize_complex(problem.ambient),
            "boundary_cover": serialize_cover(problem.boundary_cover),
            "free_vertices": list(problem.free_vertices),
            "label_mode": problem.label_mode.value,
        },
        "witness": serialize_cover(certificate.witness) if certificate.witness is not None else None,
        "pruned": [
            {"prefix": list(b.prefix), "covering_facet": list(b.covering_facet)}
            for b in certificate.pruned
        ],
        "stats": stats,
    }


def parse_certificate(data: Dict[str, Any], source: str = "<certificate>") -> Certificate:
    parsed = validate_model(CertificateFile, data, source)
    problem = parsed.problem
    ambient = parse_complex(problem.ambient, source)
    boundary_cover, _ = parse_cover(problem.boundary_cover, source)
    witness = parse_cover(parsed.witness, source)[0] if parsed.witness is not None else None
    try:
        verdict = SearchVerdict(parsed.verdict)
        mode = LabelMode(problem.label_mode)
    except ValueError as e:
        raise ValidationError(f"{source}: {str(e)}", {"file": source})
    stats_fields = {k: v for k, v in parsed.stats.items() if k in SearchStats.model_fields}
    return Certificate(
        verdict=verdict,
        problem=ExtensionProblem(
            ambient=ambient, boundary_cover=boundary_cover,
            free_vertices=tuple(problem.free_vertices), label_mode=mode,
        ),
        witness=witness,
        pruned=[PrunedBranch(prefix=tuple(b.prefix), covering_facet=tuple(b.covering_facet)) for b in parsed.pruned],
        stats=SearchStats(**stats_fields),
    )


# Verdicts

def serialize_witness(witness: Witness) -> Dict[str, Any]:
    return {
        "kind": witness.kind.value,
        "manifold": serialize_complex(witness.manifold),
        "cover": serialize_cover(witness.cover),
        "pieces": [
            {
                "vertex_map": {str(v): w for v, w in sorted(p.vertex_map.items())},
                "facets": [list(f) for f in p.facets],
                "cover": serialize_cover(p.cover),
            }
            for p in witness.pieces
        ],
        "subdivisions": witness.subdivisions,
    }


def _parse_witness(data: WitnessFile, source: str) -> Witness:
    pieces = []
    for piece in data.pieces:
        pieces.append(BoundaryPiece(
            vertex_map=dict(piece.vertex_map),
            facets=tuple(tuple(f) for f in piece.facets),
            cover=parse_cover(piece.cover, source)[0],
        ))
    return Witness(
        kind=WitnessKind(data.kind),
        manifold=parse_complex(data.manifold, source),
        cover=parse_cover(data.cover, source)[0],
        pieces=pieces,
        subdivisions=data.subdivisions,
    )


def serialize_verdict(verdict: ClassificationVerdict) -> Dict[str, Any]:
    return {
        "schema_version": TopologyConfig.SCHEMA_VERSION,
        "kind": "verdict",
        "relation": verdict.relation.value,
        "basis": verdict.basis.value if verdict.basis else None,
        "witness": serialize_witness(verdict.witness) if verdict.witness is not None else None,
        "degrees": list(verdict.degrees) if verdict.degrees is not None else None,
        "theorem": verdict.theorem,
        "notes": list(verdict.notes),
    }


def parse_verdict(data: Dict[str, Any], source: str = "<verdict>") -> ClassificationVerdict:
    parsed = validate_model(VerdictFile, data, source)
    try:
        relation = Relation(parsed.relation)
        basis = Basis(parsed.basis) if parsed.basis else None
        witness = _parse_witness(parsed.witness, source) if parsed.witness is not None else None
    except ValueError as e:
        raise ValidationError(f"{source}: {str(e)}", {"file": source})
    return ClassificationVerdict(
        relation=relation,
        basis=basis,
        witness=witness,
        degrees=tuple(parsed.degrees) if parsed.degrees is not None else None,
        theorem=parsed.theorem,
        notes=list(parsed.notes),
    )


__all__ = [
    "dumps", "read_document", "validate_model",
    "parse_complex", "serialize_complex", "parse_cover", "serialize_cover",
    "load_complex", "load_cover", "parse_inputs",
    "serialize_certificate", "parse_certificate",
    "serialize_witness", "serialize_verdict", "parse_verdict",
]
