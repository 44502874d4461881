from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

Point = Tuple[Fraction, ...]


class RegularValue(BaseModel):
    """Point interior to one facet of the boundary of the target simplex"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    facet_index: int  # index of the omitted target vertex
    point: Point
    attempt: int = 0


class Preimage(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    facet: Tuple[int, ...]  # oriented source facet
    barycentric: Point
    sign: int


class DegreeResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    degree: int
    preimages: List[Preimage] = Field(default_factory=list)
    regular_value_used: RegularValue


class CurvePoint(BaseModel):
    """A crossing of the preimage with a codimension-one face of the source"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    face: Tuple[int, ...]
    barycentric: Point
    coordinates: Point


class PLCurve(BaseModel):
    """
    Polygonal loops (closed) and arcs (ending on the source boundary).

    Points are ambient coordinates; a loop's last point connects back to its
    first point.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    loops: List[List[Point]] = Field(default_factory=list)
    arcs: List[List[Point]] = Field(default_factory=list)
    # boundary faces hit by each arc end, aligned with arcs
    arc_ends: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = Field(default_factory=list)
    subdivisions: int = 0
    regular_value: Optional[RegularValue] = None


class Crossing(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    segment_a: Tuple[int, int]  # (loop index, segment index) in the first curve
    segment_b: Tuple[int, int]
    a_over: bool
    sign: int


class LinkingResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    linking_number: int
    crossing_list: List[Crossing] = Field(default_factory=list)
    direction: Point = ()


class HopfResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    hopf_invariant: int
    regular_values: Tuple[RegularValue, RegularValue]
    pole: Point
    linking: LinkingResult
