from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from models.complex import OrientedPseudomanifold
from models.cover import Cover


class LabelMode(str, Enum):
    SINGLETON = "singleton"
    SUBSETS = "subsets"


class SearchVerdict(str, Enum):
    OBSTRUCTED = "obstructed"
    EXTENDABLE = "extendable"
    INCONCLUSIVE = "inconclusive"


class ExtensionProblem(BaseModel):
    """Extend a boundary cover of A = boundary(X) over the interior vertices of X"""
    model_config = ConfigDict(frozen=True)

    ambient: OrientedPseudomanifold
    boundary_cover: Cover
    free_vertices: Tuple[int, ...]
    label_mode: LabelMode = LabelMode.SINGLETON

    @property
    def num_sets(self) -> int:
        return self.boundary_cover.num_sets


class PrunedBranch(BaseModel):
    """Assignments to a prefix of the free vertices that already force a covering facet"""
    model_config = ConfigDict(frozen=True)

    prefix: Tuple[int, ...]  # indices into the allowed label list, one per free vertex
    covering_facet: Tuple[int, ...]


class SearchStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    nodes: int = 0
    search_space: int = 0
    exhausted: int = 0  # assignments accounted for by pruned branches
    complete: bool = False
    elapsed_seconds: float = 0.0


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: SearchVerdict
    problem: ExtensionProblem
    witness: Optional[Cover] = None
    pruned: List[PrunedBranch] = Field(default_factory=list)
    stats: SearchStats = Field(default_factory=SearchStats)
