"""
Rational normal curve, osculating planes and the two Chow forms of the boundary
CF(C_{k+1}) is det of the Bezout matrix of the dual pair, CF(S01) is a bracket
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from algebra_core import Mode, Scalar, determinant, matrix_rank, mode_of, to_scalar
from config import Config
from exceptions import DimensionError, ParameterError
from grassmann import KPlane, PluckerDual, bracket, is_bracket_zero, plucker_dual, plucker_from_dual

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OsculatingPlane:
    base_t: Scalar
    order: int
    rows: Tuple[Tuple[Scalar, ...], ...]


@dataclass(frozen=True)
class BezoutMatrix:
    entries: Tuple[Tuple[Scalar, ...], ...]
    source_pluckers: PluckerDual

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))


def _falling(i: int, r: int) -> int:
    """i (i-1) ... (i-r+1)"""
    return math.perm(i, r) if i >= r else 0


def curve_derivative(t, order: int, k: int, mode: Optional[Mode] = None) -> Tuple[Scalar, ...]:
    """order-th derivative of (1, t, ..., t^{k+1}); works on Rationals, floats and sympy symbols"""
    if order < 0 or order > k + 1:
        raise ParameterError(f"derivative order {order} outside 0..{k + 1}")
    if not isinstance(t, sp.Basic) or isinstance(t, sp.Number):
        t = to_scalar(t, mode or mode_of(t))
    zero = 0.0 if isinstance(t, float) else sp.Integer(0)
    return tuple(
        _falling(i, order) * t ** (i - order) if i >= order else zero
        for i in range(k + 2)
    )


def curve_point(t, k: int, mode: Optional[Mode] = None) -> Tuple[Scalar, ...]:
    return curve_derivative(t, 0, k, mode)


def osculating_rows(t, m: int, k: int, mode: Optional[Mode] = None) -> List[Tuple[Scalar, ...]]:
    """Derivatives of orders 0..m-1 at t; m = 0 gives no rows"""
    return [curve_derivative(t, r, k, mode) for r in range(m)]


def osculating_plane(t, m: int, k: int, mode: Mode = Mode.EXACT) -> OsculatingPlane:
    if m < 1 or m > k + 2:
        raise ParameterError(f"osculating order {m} outside 1..{k + 2}")
    value = to_scalar(t, mode)
    return OsculatingPlane(value, m, tuple(osculating_rows(value, m, k, mode)))


# === Bezout matrix ===

def bezout_entries_from_pluckers(p, n: int) -> List[List]:
    """B_ij = sum_{r=max(0,i-j)}^{min(i,n-1-j)} p(j+r+1, i-r) with p antisymmetric, n = k+1

    p is any callable (a, b) -> value, so symbolic Pluecker coordinates work as well.
    """
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for r in range(max(0, i - j), min(i, n - 1 - j) + 1):
                acc = acc + p(j + r + 1, i - r)
            row.append(acc)
        entries.append(row)
    return entries


def bezout_entries_from_dual(dual: Sequence[Sequence]) -> List[List]:
    coords = plucker_from_dual(dual)
    return bezout_entries_from_pluckers(coords, len(dual[0]) - 1)


def bezout_matrix(V: KPlane) -> BezoutMatrix:
    coords = plucker_dual(V)
    entries = bezout_entries_from_pluckers(coords, V.k + 1)
    zero = to_scalar(0, V.mode)
    entries = [[zero + x for x in row] for row in entries]
    return BezoutMatrix(tuple(tuple(row) for row in entries), coords)


def bezout_sign(k: int) -> int:
    """epsilon with det B = epsilon * Res(f, g) at formal degree k+1"""
    return -1 if (k * (k + 1) // 2) % 2 else 1


def chow_form_curve(V: KPlane) -> Scalar:
    """CF(C_{k+1}) at the stored dual representative; zero iff V meets the curve over C"""
    return determinant(bezout_matrix(V).entries, V.mode)


def chow_form_secant(V: KPlane) -> Scalar:
    """<V gamma(0) gamma(1)>; zero iff V meets the line S01"""
    return bracket(V, curve_point(0, V.k, V.mode), curve_point(1, V.k, V.mode))


def meets_secant_line(V: KPlane, tol_rank: float = Config.TAU_RANK) -> bool:
    return is_bracket_zero(V, curve_point(0, V.k, V.mode), curve_point(1, V.k, V.mode), tol_rank)


def bezout_corank(V: KPlane, tol_rank: float = Config.TAU_RANK) -> int:
    """Number of common roots of f and g with multiplicity, counting roots at infinity"""
    B = bezout_matrix(V)
    return B.size - matrix_rank(B.entries, V.mode, tol_rank)


# === Generalized Vandermonde ===

def generalized_vandermonde_matrix(nodes: Sequence, mults: Sequence[int],
                                   mode: Mode = Mode.EXACT) -> List[Tuple[Scalar, ...]]:
    """Rows gamma^{(r)}(t_i) for r < mults_i, node by node; square of size sum(mults)"""
    if len(nodes) != len(mults):
        raise DimensionError("nodes and multiplicities differ in length")
    if any(m < 1 for m in mults):
        raise ParameterError("multiplicities must be positive")
    size = sum(mults)
    rows = []
    for t, m in zip(nodes, mults):
        rows.extend(osculating_rows(to_scalar(t, mode), m, size - 2, mode))
    return rows


def generalized_vandermonde_direct(nodes: Sequence, mults: Sequence[int], mode: Mode = Mode.EXACT) -> Scalar:
    return determinant(generalized_vandermonde_matrix(nodes, mults, mode), mode)


def generalized_vandermonde_det(nodes: Sequence, mults: Sequence[int], k: Optional[int] = None,
                                mode: Mode = Mode.EXACT) -> Scalar:
    """Closed form prod_i prod_{r<m_i} r!  *  prod_{i<j} (t_j - t_i)^{m_i m_j}

    Vanishes when two nodes coincide.
    """
    if len(nodes) != len(mults):
        raise DimensionError("nodes and multiplicities differ in length")
    if k is not None and sum(mults) != k + 2:
        raise DimensionError(f"multiplicities sum to {sum(mults)}, expected {k + 2}")
    if any(m < 1 for m in mults):
        raise ParameterError("multiplicities must be positive")
    values = [to_scalar(t, mode) for t in nodes]
    result = to_scalar(1, mode)
    for m in mults:
        for r in range(m):
            result *= math.factorial(r)
    for a in range(len(values)):
        for b in range(a + 1, len(values)):
            result *= (values[b] - values[a]) ** (mults[a] * mults[b])
    return result


def stacked_osculating_rank(nodes: Sequence, mults: Sequence[int], k: int, mode: Mode = Mode.EXACT) -> int:
    """Rank of the osculating spaces O^{(m_i)}(t_i) stacked; min(sum m_i, k+2) for distinct nodes"""
    rows = []
    for t, m in zip(nodes, mults):
        rows.extend(osculating_rows(to_scalar(t, mode), m, k, mode))
    return matrix_rank(rows, mode)
