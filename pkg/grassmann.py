"""
Points of Gr(k, k+2): primal spanning rows, dual cokernel pair, Pluecker coordinates and brackets
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from algebra_core import (
    Mode,
    Scalar,
    UniPoly,
    determinant,
    float_array,
    matrix_rank,
    nullspace_rows,
    relative_rank,
    to_scalar,
    format_scalar,
)
from config import Config
from exceptions import DegenerateInputError, DimensionError

logger = logging.getLogger(__name__)

Rows = Tuple[Tuple[Scalar, ...], ...]


@dataclass(frozen=True)
class KPlane:
    """A k-dimensional subspace of (k+2)-space, kept as primal rows plus a dual pair"""

    primal: Rows
    dual: Rows
    k: int
    mode: Mode = Mode.EXACT

    @property
    def ambient(self) -> int:
        return self.k + 2

    def primal_array(self) -> np.ndarray:
        return float_array(self.primal)

    def dual_array(self) -> np.ndarray:
        return float_array(self.dual)

    def to_strings(self) -> List[List[str]]:
        return [[format_scalar(x) for x in row] for row in self.primal]

    def __str__(self) -> str:
        return "\n".join(" ".join(row) for row in self.to_strings())


@dataclass(frozen=True)
class PluckerDual:
    """2x2 minors p_ab of the dual matrix, keyed by 0 <= a < b <= k+1"""

    p: Dict[Tuple[int, int], Scalar]
    size: int
    mode: Mode = Mode.EXACT

    def __call__(self, a: int, b: int) -> Scalar:
        if a == b:
            return to_scalar(0, self.mode)
        if a < b:
            return self.p[(a, b)]
        return -self.p[(b, a)]

    def relations_hold(self, tol: float = Config.TAU_ORTHO) -> bool:
        """Three-term Pluecker relations on every quadruple a < b < c < d"""
        for a, b, c, d in itertools.combinations(range(self.size), 4):
            value = self(a, b) * self(c, d) - self(a, c) * self(b, d) + self(a, d) * self(b, c)
            if self.mode == Mode.EXACT:
                if value != 0:
                    return False
            elif abs(value) > tol:
                return False
        return True


def _as_rows(rows: Sequence[Sequence], mode: Mode) -> Rows:
    return tuple(tuple(to_scalar(x, mode) for x in row) for row in rows)


def _check_shape(rows: Rows, width: int, what: str):
    for row in rows:
        if len(row) != width:
            raise DimensionError(f"{what} row has {len(row)} entries, expected {width}")


def plane_from_primal(rows: Sequence[Sequence], mode: Mode = Mode.EXACT,
                      tol_rank: float = Config.TAU_RANK) -> KPlane:
    """Build a KPlane from k spanning rows; the dual pair is the normalized cokernel basis"""
    primal = _as_rows(rows, mode)
    k = len(primal)
    if k < 1:
        raise DimensionError("a plane needs at least one row")
    _check_shape(primal, k + 2, "primal")
    rank = matrix_rank(primal, mode, tol_rank)
    if rank < k:
        raise DegenerateInputError(f"primal rows have rank {rank}, expected {k}")
    dual = tuple(nullspace_rows(primal, mode, tol_rank))
    if len(dual) != 2:
        raise DegenerateInputError(f"cokernel has dimension {len(dual)}, expected 2")
    return KPlane(primal, dual, k, mode)


def plane_from_pair(primal_rows: Sequence[Sequence], dual_rows: Sequence[Sequence],
                    mode: Mode = Mode.EXACT, tol_rank: float = Config.TAU_RANK) -> KPlane:
    """KPlane with an explicitly chosen dual representative"""
    primal = _as_rows(primal_rows, mode)
    dual = _as_rows(dual_rows, mode)
    k = len(primal)
    _check_shape(primal, k + 2, "primal")
    _check_shape(dual, k + 2, "dual")
    if len(dual) != 2 or matrix_rank(dual, mode, tol_rank) != 2:
        raise DegenerateInputError("dual needs two independent rows")
    if matrix_rank(primal, mode, tol_rank) != k:
        raise DegenerateInputError("primal rows are dependent")
    for row in primal:
        for d in dual:
            value = sum(x * y for x, y in zip(row, d))
            if (mode == Mode.EXACT and value != 0) or (mode == Mode.FLOAT and abs(value) > Config.TAU_ORTHO):
                raise DegenerateInputError("dual rows do not annihilate the primal rows")
    return KPlane(primal, dual, k, mode)


def change_basis(V: KPlane, matrix: Sequence[Sequence]) -> KPlane:
    """Same subspace, primal rows replaced by matrix . primal"""
    rows = []
    for coeffs in matrix:
        rows.append([sum(c * V.primal[s][col] for s, c in enumerate(coeffs)) for col in range(V.ambient)])
    return plane_from_primal(rows, V.mode)


def as_mode(V: KPlane, mode: Mode, tol_rank: float = Config.TAU_RANK) -> KPlane:
    """Same primal and dual representatives in another arithmetic mode"""
    if mode == V.mode:
        return V
    if mode == Mode.EXACT:
        return plane_from_primal(V.primal, mode, tol_rank)
    return plane_from_pair(V.primal, V.dual, mode, tol_rank)


def dual_polynomials(V: KPlane) -> Tuple[UniPoly, UniPoly]:
    """f, g whose coefficient vectors are the dual rows; V contains gamma(t) iff f(t) = g(t) = 0"""
    f = UniPoly.from_coeffs(V.dual[0], V.mode)
    g = UniPoly.from_coeffs(V.dual[1], V.mode)
    return f, g


def bracket(V: KPlane, q1: Sequence, q2: Sequence) -> Scalar:
    """det of primal rows stacked over q1, q2"""
    if len(q1) != V.ambient or len(q2) != V.ambient:
        raise DimensionError("bracket vectors must live in the ambient space")
    rows = [list(row) for row in V.primal] + [
        [to_scalar(x, V.mode) for x in q1],
        [to_scalar(x, V.mode) for x in q2],
    ]
    return determinant(rows, V.mode)


def is_bracket_zero(V: KPlane, q1: Sequence, q2: Sequence, tol_rank: float = Config.TAU_RANK) -> bool:
    if V.mode == Mode.EXACT:
        return bracket(V, q1, q2) == 0
    rows = np.vstack([V.primal_array(), np.asarray(q1, dtype=float), np.asarray(q2, dtype=float)])
    return relative_rank(rows, tol_rank) < V.ambient


def plucker_from_dual(dual: Sequence[Sequence], mode: Mode = Mode.EXACT) -> PluckerDual:
    size = len(dual[0])
    p = {}
    for a, b in itertools.combinations(range(size), 2):
        p[(a, b)] = dual[0][a] * dual[1][b] - dual[0][b] * dual[1][a]
    return PluckerDual(p, size, mode)


def plucker_dual(V: KPlane) -> PluckerDual:
    coords = plucker_from_dual(V.dual, V.mode)
    if all(v == 0 for v in coords.p.values()):
        raise DegenerateInputError("dual rows are dependent")
    return coords


def contains_subspace(V: KPlane, W: Sequence[Sequence], tol_rank: float = Config.TAU_RANK) -> bool:
    """True iff every row of W lies in the row span of V.primal"""
    if len(W) == 0:
        return True
    rows = [list(row) for row in V.primal] + [[to_scalar(x, V.mode) for x in row] for row in W]
    return matrix_rank(rows, V.mode, tol_rank) == V.k


def same_subspace(V: KPlane, W: KPlane) -> bool:
    return V.k == W.k and contains_subspace(V, W.primal)
