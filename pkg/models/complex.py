from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

Simplex = Tuple[int, ...]


class SimplicialComplex(BaseModel):
    """Pure simplicial complex stored by its facets; faces are implied"""
    model_config = ConfigDict(frozen=True)

    vertex_ids: Tuple[int, ...]
    facets: Tuple[Simplex, ...]

    @property
    def dimension(self) -> int:
        return len(self.facets[0]) - 1 if self.facets else -1

    def faces(self, k: int) -> List[Simplex]:
        """All k-faces in ascending lexicographic order"""
        if k < 0 or k > self.dimension:
            return []
        found = set()
        for facet in self.facets:
            found.update(combinations(facet, k + 1))
        return sorted(found)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(self.faces(k)) for k in range(self.dimension + 1))


class GeometricRealization(BaseModel):
    """Exact rational coordinates for every vertex"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coordinates: Dict[int, Tuple[Fraction, ...]]

    @property
    def ambient_dimension(self) -> int:
        return len(next(iter(self.coordinates.values()))) if self.coordinates else 0


class OrientedPseudomanifold(BaseModel):
    """
    Pseudomanifold with a coherent orientation.

    oriented_facets[i] lists the vertices of complex.facets[i]; the even
    permutation class of that tuple is the facet orientation.
    """
    model_config = ConfigDict(frozen=True)

    complex: SimplicialComplex
    oriented_facets: Tuple[Simplex, ...]
    boundary_faces: Tuple[Simplex, ...] = ()
    realization: Optional[GeometricRealization] = None
    # new vertex -> face of the previous complex it subdivides
    vertex_origin: Optional[Dict[int, Simplex]] = None
    # vertex -> carrier face in the root complex (before any subdivision)
    carriers: Optional[Dict[int, Simplex]] = None

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    @property
    def is_closed(self) -> bool:
        return not self.boundary_faces

    @property
    def vertex_ids(self) -> Tuple[int, ...]:
        return self.complex.vertex_ids


class PrismComplex(BaseModel):
    """Staircase triangulation of |M| x [0,1] with layer bookkeeping"""
    model_config = ConfigDict(frozen=True)

    manifold: OrientedPseudomanifold
    base: OrientedPseudomanifold
    # original vertex -> prism vertex on the bottom (t=0) and top (t=1) copies
    bottom: Dict[int, int]
    top: Dict[int, int]


class HomologyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    betti: List[int] = Field(default_factory=list)
    torsion: List[List[int]] = Field(default_factory=list)

    def is_sphere_of_dimension(self, m: int) -> bool:
        """True when the report matches the integral homology of S^m"""
        if len(self.betti) != m + 1:
            return False
        expected = [1] + [0] * (m - 1) + [1] if m > 0 else [2]
        return self.betti == expected and all(not t for t in self.torsion)
