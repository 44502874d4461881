from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from models.complex import OrientedPseudomanifold
from models.cover import Cover


class Relation(str, Enum):
    HOMOTOPIC = "homotopic"
    COBORDANT = "cobordant"
    DISTINCT = "distinct"
    NULL_COBORDANT = "null_cobordant"
    UNKNOWN = "unknown"


class Basis(str, Enum):
    WITNESS = "witness"
    INVARIANT = "invariant"
    THEOREM = "theorem"


class WitnessKind(str, Enum):
    PRISM = "prism"
    CONE = "cone"


class BoundaryPiece(BaseModel):
    """One end of a witness: how a given closed complex sits in the witness boundary"""
    model_config = ConfigDict(frozen=True)

    vertex_map: Dict[int, int]  # piece vertex -> witness vertex
    facets: Tuple[Tuple[int, ...], ...]
    cover: Cover


class Witness(BaseModel):
    """A cover of W with no covering simplex restricting to the given covers on the ends"""
    model_config = ConfigDict(frozen=True)

    kind: WitnessKind
    manifold: OrientedPseudomanifold
    cover: Cover
    pieces: List[BoundaryPiece] = Field(default_factory=list)
    subdivisions: int = 0


class ClassificationVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    relation: Relation
    basis: Optional[Basis] = None
    witness: Optional[Witness] = None
    degrees: Optional[Tuple[int, ...]] = None
    theorem: Optional[str] = None
    notes: List[str] = Field(default_factory=list)
