from fractions import Fraction
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict

from models.complex import OrientedPseudomanifold


class Cover(BaseModel):
    """
    Sets U_0..U_{num_sets-1} given by vertex labels: U_i is the union of the
    open stars of the vertices whose label set contains i.
    """
    model_config = ConfigDict(frozen=True)

    num_sets: int
    labels: Dict[int, Tuple[int, ...]]

    @property
    def target_dim(self) -> int:
        """Dimension n of the sphere the induced map lands in"""
        return self.num_sets - 2

    def mask(self, vertex: int) -> int:
        bits = 0
        for label in self.labels[vertex]:
            bits |= 1 << label
        return bits

    def masks(self) -> Dict[int, int]:
        return {v: self.mask(v) for v in self.labels}


class PartitionOfUnity(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: Dict[int, Tuple[Fraction, ...]]

    def support(self, vertex: int) -> Tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights[vertex]) if w > 0)


class PLMap(BaseModel):
    """Map affine on simplices into the standard simplex with vertices v_0..v_{target_dim}"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: OrientedPseudomanifold
    target_dim: int
    # barycentric coordinates in the target simplex, length target_dim + 1
    vertex_images: Dict[int, Tuple[Fraction, ...]]

    def zero_mask(self, vertex: int) -> int:
        """Bit i set when coordinate i of the vertex image vanishes"""
        bits = 0
        for i, w in enumerate(self.vertex_images[vertex]):
            if w == 0:
                bits |= 1 << i
        return bits
