"""Integral simplicial homology through Smith normal form of boundary matrices."""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from errors import SizeLimit, ValidationError
from models.complex import HomologyReport, SimplicialComplex
from services.config import TopologyConfig

logger = logging.getLogger(__name__)


def boundary_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    """Matrix of the boundary map C_k -> C_{k-1} for ascending orientations"""
    rows = K.faces(k - 1)
    cols = K.faces(k)
    matrix = np.zeros((len(rows), len(cols)), dtype=np.int64)
    if k <= 0:
        return matrix
    row_index = {face: i for i, face in enumerate(rows)}
    for j, face in enumerate(cols):
        for position in range(len(face)):
            sub = face[:position] + face[position + 1:]
            matrix[row_index[sub], j] = (-1) ** position
    return matrix


def _factors(matrix: np.ndarray) -> List[int]:
    """Nonzero invariant factors, normalized positive"""
    height, width = matrix.shape
    if height == 0 or width == 0 or not matrix.any():
        return []
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in matrix.tolist()], (height, width), ZZ)
    return [abs(int(f)) for f in invariant_factors(dm) if f != 0]


def homology(K: SimplicialComplex, max_dim: Optional[int] = None,
             max_cells: Optional[int] = None) -> HomologyReport:
    """
    H_0..H_max_dim of K over the integers.

    betti_k = dim C_k - rank d_k - rank d_{k+1}; the torsion of H_k is the
    list of invariant factors > 1 of d_{k+1}.
    """
    top = K.dimension if max_dim is None else max_dim
    if top < 0 or top > K.dimension:
        raise ValidationError(f"max_dim must lie in 0..{K.dimension}", {"max_dim": top})
    limit = TopologyConfig.HOMOLOGY_MAX_CELLS if max_cells is None else max_cells
    counts = {k: len(K.faces(k)) for k in range(min(top + 1, K.dimension) + 1)}
    too_big = {k: c for k, c in counts.items() if c > limit}
    if too_big:
        raise SizeLimit(
            f"complex has more than {limit} cells in some dimension",
            {"cells": too_big, "limit": limit}
        )

    factors: Dict[int, List[int]] = {}
    for k in range(1, min(top + 1, K.dimension) + 1):
        factors[k] = _factors(boundary_matrix(K, k))

    betti: List[int] = []
    torsion: List[List[int]] = []
    for k in range(top + 1):
        rank_k = len(factors.get(k, []))
        rank_next = len(factors.get(k + 1, []))
        betti.append(counts[k] - rank_k - rank_next)
        torsion.append(sorted(f for f in factors.get(k + 1, []) if f > 1))
    logger.debug(f"homology of {K.dimension}-complex: betti={betti} torsion={torsion}")
    return HomologyReport(betti=betti, torsion=torsion)


def is_homology_sphere(K: SimplicialComplex, m: Optional[int] = None) -> bool:
    """Whether K has the integral homology of S^m (m defaults to dim K)"""
    m = K.dimension if m is None else m
    if m != K.dimension:
        return False
    try:
        return homology(K).is_sphere_of_dimension(m)
    except SizeLimit as e:
        logger.warning(f"sphere check skipped: {e.message}")
        return False


def sphere_check(K: SimplicialComplex) -> Tuple[bool, Optional[HomologyReport]]:
    """Sphere test that also hands back the report when it could be computed"""
    try:
        report = homology(K)
    except SizeLimit as e:
        logger.warning(f"sphere check skipped: {e.message}")
        return False, None
    return report.is_sphere_of_dimension(K.dimension), report
