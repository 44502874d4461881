from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ComplexFile(BaseModel):
    """On-disk complex: facets as listed tuples, orientation relative to the listed order"""
    model_config = ConfigDict(extra="forbid")

    dimension: int
    vertices: List[int]
    facets: List[List[int]]
    orientation: Optional[List[int]] = None
    coordinates: Optional[Dict[int, List[str]]] = None
    carriers: Optional[Dict[int, List[int]]] = None
    closed: bool = False
    schema_version: int = 1
    kind: str = "complex"


class CoverFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    num_sets: int
    labels: Dict[int, List[int]]
    weights: Optional[Dict[int, List[str]]] = None
    schema_version: int = 1
    kind: str = "cover"


class PieceFile(BaseModel):
    vertex_map: Dict[int, int]
    facets: List[List[int]]
    cover: CoverFile


class WitnessFile(BaseModel):
    kind: str
    manifold: ComplexFile
    cover: CoverFile
    pieces: List[PieceFile] = Field(default_factory=list)
    subdivisions: int = 0


class ProblemFile(BaseModel):
    ambient: ComplexFile
    boundary_cover: CoverFile
    free_vertices: List[int]
    label_mode: str = "singleton"


class BranchFile(BaseModel):
    prefix: List[int]
    covering_facet: List[int]


class CertificateFile(BaseModel):
    schema_version: int = 1
    kind: str = "certificate"
    verdict: str
    problem: ProblemFile
    witness: Optional[CoverFile] = None
    pruned: List[BranchFile] = Field(default_factory=list)
    stats: Dict[str, Any] = Field(default_factory=dict)


class VerdictFile(BaseModel):
    schema_version: int = 1
    kind: str = "verdict"
    relation: str
    basis: Optional[str] = None
    witness: Optional[WitnessFile] = None
    degrees: Optional[List[int]] = None
    theorem: Optional[str] = None
    notes: List[str] = Field(default_factory=list)
