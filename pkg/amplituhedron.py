"""
Amplituhedra A_{n,k} and the limit amplituhedron
Partitions of [0, 1], the matrices Z(I), totally nonnegative samples, the amplituhedron map
and the membership oracle for the limit set
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from pydantic import BaseModel, Field

from algebra_core import Mode, Scalar, determinant, format_scalar, to_scalar
from chowforms import bezout_entries_from_pluckers, curve_point, meets_secant_line
from config import Config
from exceptions import (
    DegenerateInputError,
    DimensionError,
    MapUndefinedError,
    ParameterError,
    RetryCapExceeded,
)
from grassmann import KPlane, bracket, plane_from_primal
from strata import intersection_divisor
from utils import distinct_rationals, make_rng, random_rational

logger = logging.getLogger(__name__)


# === Partitions and Z(I) ===

@dataclass(frozen=True)
class Partition:
    """0 = t_1 < t_2 < ... < t_n = 1"""

    values: Tuple[sp.Rational, ...]

    def __post_init__(self):
        values = tuple(to_scalar(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 2 or values[0] != 0 or values[-1] != 1:
            raise ParameterError("a partition starts at 0 and ends at 1")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ParameterError("partition values must increase strictly")

    @property
    def n(self) -> int:
        return len(self.values)

    @classmethod
    def uniform(cls, n: int) -> "Partition":
        if n < 2:
            raise ParameterError("a partition has at least two points")
        return cls(tuple(sp.Rational(i, n - 1) for i in range(n)))

    @classmethod
    def dyadic(cls, depth: int) -> "Partition":
        return cls.uniform(2 ** depth + 1)

    def refine(self) -> "Partition":
        """Insert every midpoint"""
        mids = [(a + b) / 2 for a, b in zip(self.values, self.values[1:])]
        return Partition(tuple(sorted(self.values + tuple(mids))))

    def is_refined_by(self, other: "Partition") -> bool:
        return set(self.values) <= set(other.values)

    def interval_of(self, t) -> int:
        """1-based i with t_i <= t <= t_{i+1}"""
        for i, (a, b) in enumerate(zip(self.values, self.values[1:]), start=1):
            if a <= t <= b:
                return i
        raise ParameterError(f"{t} lies outside [0, 1]")

    def to_strings(self) -> List[str]:
        return [str(v) for v in self.values]


@dataclass(frozen=True)
class ZMatrix:
    rows: Tuple[Tuple[Scalar, ...], ...]
    partition: Partition
    k: int
    mode: Mode = Mode.EXACT

    @property
    def n(self) -> int:
        return len(self.rows)

    def array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])


def z_matrix(I: Partition, k: int, mode: Mode = Mode.EXACT) -> ZMatrix:
    if k < 1:
        raise ParameterError("k must be positive")
    if I.n < k + 2:
        raise DegenerateInputError(f"Z(I) needs at least {k + 2} partition points, got {I.n}")
    rows = tuple(curve_point(to_scalar(t, mode), k, mode) for t in I.values)
    return ZMatrix(rows, I, k, mode)


def maximal_minors(rows: Sequence[Sequence], mode: Mode = Mode.EXACT) -> Dict[Tuple[int, ...], Scalar]:
    """Minors of a k x n matrix on every k-subset of columns"""
    k, n = len(rows), len(rows[0])
    return {
        cols: determinant([[row[c] for c in cols] for row in rows], mode)
        for cols in itertools.combinations(range(n), k)
    }


# === Totally nonnegative samples ===

class PositivityLevel(str, Enum):
    STRICTLY_POSITIVE = "strictly-positive"
    NONNEGATIVE = "nonnegative"


@dataclass(frozen=True)
class TNNPoint:
    matrix: Tuple[Tuple[Scalar, ...], ...]
    level: PositivityLevel

    @property
    def k(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        return len(self.matrix[0])

    def verify(self) -> bool:
        minors = list(maximal_minors(self.matrix).values())
        if self.level == PositivityLevel.STRICTLY_POSITIVE:
            return all(m > 0 for m in minors)
        return all(m >= 0 for m in minors) and any(m != 0 for m in minors)

    def to_strings(self) -> List[List[str]]:
        return [[format_scalar(x) for x in row] for row in self.matrix]


def sample_tnn(k: int, n: int, level: PositivityLevel, seed: int,
               retries: int = Config.TNN_RETRIES) -> TNNPoint:
    """Column-scaled Vandermonde at random increasing positive nodes; nonnegative samples zero some columns"""
    if k < 1 or k > n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = make_rng(seed)
    for _ in range(retries):
        nodes = distinct_rationals(rng, n)
        scales = [random_rational(rng, 0, 2) for _ in range(n)]
        rows = [[scales[c] * nodes[c] ** r for c in range(n)] for r in range(k)]
        if level == PositivityLevel.NONNEGATIVE and n > k:
            zeroed = rng.choice(n, size=int(rng.integers(1, n - k + 1)), replace=False)
            for c in zeroed:
                for row in rows:
                    row[int(c)] = sp.Integer(0)
        point = TNNPoint(tuple(tuple(row) for row in rows), level)
        if any(all(x == 0 for x in row) for row in point.matrix):
            continue
        if point.verify():
            return point
    raise RetryCapExceeded(f"no {level.value} sample of Gr({k},{n}) within {retries} attempts")


def pad_tnn(C: TNNPoint, I: Partition, J: Partition) -> TNNPoint:
    """Same point seen on a refinement J of I: zero columns at the new partition points"""
    if not I.is_refined_by(J):
        raise ParameterError("J does not refine I")
    position = {t: c for c, t in enumerate(I.values)}
    zero = sp.Integer(0)
    rows = tuple(
        tuple(row[position[t]] if t in position else zero for t in J.values)
        for row in C.matrix
    )
    return TNNPoint(rows, PositivityLevel.NONNEGATIVE)


def amplituhedron_map(C: TNNPoint, Z: ZMatrix) -> KPlane:
    """C -> C . Z"""
    if C.n != Z.n:
        raise DimensionError(f"matrix has {C.n} columns but Z(I) has {Z.n} rows")
    zero = to_scalar(0, Z.mode)
    rows = []
    for row in C.matrix:
        rows.append([
            sum((to_scalar(row[c], Z.mode) * Z.rows[c][col] for c in range(Z.n)), zero)
            for col in range(Z.k + 2)
        ])
    try:
        return plane_from_primal(rows, Z.mode)
    except DegenerateInputError as e:
        raise MapUndefinedError(f"image of the point drops rank: {e}") from e


def projection_minor_identity_check(A: KPlane, Z: ZMatrix, tol: float = Config.TAU_ORTHO) -> Scalar:
    """Largest relative spread of det(z_i z_j) / <A Z_i Z_j> over pairs with nonzero bracket, z = A_perp Z"""
    mode = A.mode
    projected = []
    for Zi in Z.rows:
        projected.append([sum(d[c] * to_scalar(Zi[c], mode) for c in range(A.ambient)) for d in A.dual])
    ratios = []
    for i, j in itertools.combinations(range(Z.n), 2):
        b = bracket(A, Z.rows[i], Z.rows[j])
        m = projected[i][0] * projected[j][1] - projected[i][1] * projected[j][0]
        if (mode == Mode.EXACT and b == 0) or (mode == Mode.FLOAT and abs(b) <= tol):
            continue
        ratios.append(m / b)
    if not ratios:
        raise DegenerateInputError("every bracket <A Z_i Z_j> vanishes")
    base = ratios[0]
    if base == 0:
        raise DegenerateInputError("projection constant vanished")
    spread = max(abs(r - base) for r in ratios) / abs(base)
    return spread if mode == Mode.EXACT else float(spread)


# === Boundary families ===

def _shift_columns(rows: List[List], k: int) -> List[List]:
    """Right cyclic shift; the wrapped column picks up the sign (-1)^{k-1} that keeps minors nonnegative"""
    sign = -1 if (k - 1) % 2 else 1
    return [[sign * row[-1]] + row[:-1] for row in rows]


def boundary_family_matrix(i: int, n: int, k: int, seed: int, mode: Mode = Mode.EXACT) -> List[List]:
    """k x n member of the facet family: first row e_i + y e_{i+1}, the rest a positive block away from i, i+1"""
    if n <= k + 2:
        raise ParameterError(f"facet families need n > k + 2, got n={n}, k={k}")
    if i < 1 or i > n:
        raise ParameterError(f"facet index {i} outside 1..{n}")
    rng = make_rng(seed)
    y = random_rational(rng, 0, 2)
    zero = sp.Integer(0)
    first = [sp.Integer(1), y] + [zero] * (n - 2)
    nodes = [sp.Rational(c + 1, n) for c in range(n - 2)]
    scales = [random_rational(rng, 0, 2) for _ in range(n - 2)]
    rows = [first] + [
        [zero, zero] + [scales[c] * nodes[c] ** r for c in range(n - 2)]
        for r in range(k - 1)
    ]
    for _ in range(i - 1):
        rows = _shift_columns(rows, k)
    return [[to_scalar(x, mode) for x in row] for row in rows]


def boundary_family_sample(i: int, I: Partition, k: int, seed: int) -> KPlane:
    """Image of a facet-family member; lies on the facet <A Z_i Z_{i+1}> = 0 (indices cyclic)"""
    rows = boundary_family_matrix(i, I.n, k, seed)
    point = TNNPoint(tuple(tuple(r) for r in rows), PositivityLevel.NONNEGATIVE)
    return amplituhedron_map(point, z_matrix(I, k))


# === Membership ===

class MembershipStatus(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"
    UNDETERMINED = "undetermined"

    @property
    def is_member(self) -> bool:
        return self in (MembershipStatus.INTERIOR, MembershipStatus.BOUNDARY)


class Certificate(BaseModel):
    kind: str
    data: Dict[str, Any] = Field(default_factory=dict)


class Crossing(BaseModel):
    tau: float
    segment: int
    factor: str  # "curve" or "secant"
    outcome: str  # "genuine", "ambiguous" or "outside"
    parameter: List[float] = Field(default_factory=list)


class PathReport(BaseModel):
    attempt: int
    outcome: str  # "clean", "crossed" or "ambiguous"
    crossings: List[Crossing] = Field(default_factory=list)


class MembershipVerdict(BaseModel):
    status: MembershipStatus
    certificate: Optional[Certificate] = None
    tolerance_used: float = Config.BISECTION_WIDTH
    paths: List[PathReport] = Field(default_factory=list)


def boundary_incidence(V: KPlane, tol_root: float = Config.TAU_ROOT,
                       tol_rank: float = Config.TAU_RANK) -> Optional[Certificate]:
    """Curve incidence in gamma([0,1]) or a point lambda gamma(0) + mu gamma(1) of V with lambda mu >= 0"""
    divisor = intersection_divisor(V, tol_root)
    hits = divisor.in_window()
    if hits:
        loc = hits[0].location
        return Certificate(kind="curve", data={
            "interval": [format_scalar(loc.lo), format_scalar(loc.hi)],
            "multiplicity": hits[0].multiplicity,
        })
    if not meets_secant_line(V, tol_rank):
        return None
    q0, q1 = curve_point(0, V.k, V.mode), curve_point(1, V.k, V.mode)
    N = [[sum(d[c] * q[c] for c in range(V.ambient)) for q in (q0, q1)] for d in V.dual]
    if V.mode == Mode.EXACT:
        kernel = sp.Matrix(N).nullspace()
        lam, mu = kernel[0][0], kernel[0][1]
    else:
        _u, _s, vt = np.linalg.svd(np.array(N, dtype=float))
        lam, mu = float(vt[-1][0]), float(vt[-1][1])
    if lam * mu >= 0:
        return Certificate(kind="segment", data={"lambda": format_scalar(lam), "mu": format_scalar(mu)})
    return None


def _vandermonde_reference(k: int, n: int) -> TNNPoint:
    rows = tuple(tuple(sp.Integer(c) ** r for c in range(1, n + 1)) for r in range(k))
    return TNNPoint(rows, PositivityLevel.STRICTLY_POSITIVE)


@lru_cache(maxsize=None)
def reference_plane(k: int) -> KPlane:
    """Image of the k x (k+3) Vandermonde point (all ones when k = 1) under Z of the uniform partition"""
    n = k + 3
    return amplituhedron_map(_vandermonde_reference(k, n), z_matrix(Partition.uniform(n), k))


def _plucker_norm(P: np.ndarray) -> float:
    k = P.shape[0]
    minors = [np.linalg.det(P[:, list(cols)]) for cols in itertools.combinations(range(P.shape[1]), k)]
    return float(np.linalg.norm(minors))


def choose_chart(planes: Sequence[np.ndarray], k: int) -> Tuple[int, ...]:
    """Column set J maximizing the smallest normalized minor; the last k columns win ties"""
    ambient = k + 2
    candidates = [tuple(range(2, ambient))] + [
        J for J in itertools.combinations(range(ambient), k) if J != tuple(range(2, ambient))
    ]
    norms = [_plucker_norm(P) for P in planes]
    best, best_score = candidates[0], -1.0
    for J in candidates:
        score = min(abs(np.linalg.det(P[:, list(J)])) / norm for P, norm in zip(planes, norms))
        if score > best_score:
            best, best_score = J, score
    return best


def chart_coordinates(P: np.ndarray, J: Sequence[int]) -> np.ndarray:
    """k x 2 entries of P[:, J]^{-1} P on the complement columns"""
    comp = [c for c in range(P.shape[1]) if c not in J]
    normalized = np.linalg.solve(P[:, list(J)], P)
    return normalized[:, comp]


def chart_planes(X: np.ndarray, J: Sequence[int], k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Primal rows (m, k, k+2) and chart dual (m, 2, k+2) for stacked chart points X of shape (m, k, 2)"""
    comp = [c for c in range(k + 2) if c not in J]
    m = X.shape[0]
    primal = np.zeros((m, k, k + 2))
    primal[:, np.arange(k), list(J)] = 1.0
    primal[:, :, comp] = X
    dual = np.zeros((m, 2, k + 2))
    for a in range(2):
        dual[:, a, comp[a]] = 1.0
        dual[:, a, list(J)] = -X[:, :, a]
    return primal, dual


def chart_chow_values(X: np.ndarray, J: Sequence[int], k: int) -> Tuple[np.ndarray, np.ndarray]:
    """CF(C_{k+1}) and <A gamma(0) gamma(1)> along stacked chart points, using the chart representatives"""
    primal, dual = chart_planes(X, J, k)
    minors = dual[:, 0, :, None] * dual[:, 1, None, :] - dual[:, 1, :, None] * dual[:, 0, None, :]

    def p(a, b):
        return minors[:, a, b]

    entries = bezout_entries_from_pluckers(p, k + 1)
    B = np.stack([np.stack(row, axis=-1) for row in entries], axis=-2)
    F = np.linalg.det(B)
    ends = np.array([curve_point(0.0, k, Mode.FLOAT), curve_point(1.0, k, Mode.FLOAT)])
    stacked = np.concatenate([primal, np.broadcast_to(ends, (X.shape[0], 2, k + 2))], axis=1)
    G = np.linalg.det(stacked)
    return F, G


def _examine_curve(dual: np.ndarray, k: int) -> Tuple[str, List[float]]:
    f, g = dual[0], dual[1]
    scale_f, scale_g = np.max(np.abs(f)), np.max(np.abs(g))
    if abs(f[-1]) <= Config.COMMON_ROOT_GAP * scale_f and abs(g[-1]) <= Config.COMMON_ROOT_GAP * scale_g:
        return "outside", [float("inf")]
    roots_f = np.roots(np.trim_zeros(f[::-1], "f"))
    roots_g = np.roots(np.trim_zeros(g[::-1], "f"))
    if roots_f.size == 0 or roots_g.size == 0:
        return "ambiguous", []
    gaps = np.abs(roots_f[:, None] - roots_g[None, :])
    a, b = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    t = (roots_f[a] + roots_g[b]) / 2
    if gaps[a, b] > Config.COMMON_ROOT_GAP * max(1.0, abs(t)) or abs(t.imag) > Config.COMMON_ROOT_GAP:
        return "ambiguous", []
    x = float(t.real)
    band = Config.VERTEX_BAND
    if abs(x) <= band or abs(x - 1) <= band:
        return "ambiguous", [x]
    return ("genuine" if 0 < x < 1 else "outside"), [x]


def _examine_secant(dual: np.ndarray, k: int) -> Tuple[str, List[float]]:
    ends = np.array([curve_point(0.0, k, Mode.FLOAT), curve_point(1.0, k, Mode.FLOAT)])
    N = dual @ ends.T
    _u, _s, vt = np.linalg.svd(N)
    lam, mu = float(vt[-1][0]), float(vt[-1][1])
    if min(abs(lam), abs(mu)) <= Config.VERTEX_BAND:
        return "ambiguous", [lam, mu]
    return ("genuine" if lam * mu > 0 else "outside"), [lam, mu]


def _bisect(X0: np.ndarray, X1: np.ndarray, J, k: int, lo: float, hi: float, which: int) -> float:
    def value(tau):
        point = ((1 - tau) * X0 + tau * X1)[None]
        return chart_chow_values(point, J, k)[which][0]

    v_lo = value(lo)
    while hi - lo > Config.BISECTION_WIDTH:
        mid = (lo + hi) / 2
        v_mid = value(mid)
        if v_mid == 0:
            return mid
        if np.sign(v_mid) == np.sign(v_lo):
            lo, v_lo = mid, v_mid
        else:
            hi = mid
    return (lo + hi) / 2


def track_segment(X0: np.ndarray, X1: np.ndarray, J, k: int, segment: int = 0,
                  steps: int = Config.PATH_STEPS) -> List[Crossing]:
    """Sign changes of both Chow forms along X0 -> X1, each bisected and classified"""
    taus = np.linspace(0.0, 1.0, steps + 1)
    X = (1 - taus)[:, None, None] * X0[None] + taus[:, None, None] * X1[None]
    values = chart_chow_values(X, J, k)
    crossings = []
    for which, factor in enumerate(("curve", "secant")):
        signs = np.sign(values[which])
        # grid nodes where the form is exactly zero are skipped, so a zero node is bracketed by its neighbours
        nonzero = np.nonzero(signs)[0]
        flipped = signs[nonzero[:-1]] != signs[nonzero[1:]]
        for lo_idx, hi_idx in zip(nonzero[:-1][flipped], nonzero[1:][flipped]):
            tau = _bisect(X0, X1, J, k, float(taus[lo_idx]), float(taus[hi_idx]), which)
            _primal, dual = chart_planes(((1 - tau) * X0 + tau * X1)[None], J, k)
            examine = _examine_curve if factor == "curve" else _examine_secant
            outcome, parameter = examine(dual[0], k)
            crossings.append(Crossing(tau=tau, segment=segment, factor=factor, outcome=outcome, parameter=parameter))
    crossings.sort(key=lambda c: (c.segment, c.tau))
    return crossings


def _path_outcome(crossings: List[Crossing]) -> str:
    if any(c.outcome == "genuine" for c in crossings):
        return "crossed"
    if any(c.outcome == "ambiguous" for c in crossings):
        return "ambiguous"
    return "clean"


def membership(V: KPlane, seed: int = 0, retries: int = Config.PATH_RETRIES, steps: int = Config.PATH_STEPS,
               tol_rank: float = Config.TAU_RANK, tol_root: float = Config.TAU_ROOT) -> MembershipVerdict:
    """Boundary by incidence; otherwise interior or exterior by tracking paths to the reference plane"""
    certificate = boundary_incidence(V, tol_root, tol_rank)
    if certificate is not None:
        return MembershipVerdict(status=MembershipStatus.BOUNDARY, certificate=certificate)

    k = V.k
    R = reference_plane(k)
    P_V, P_R = V.primal_array(), R.primal_array()
    J = choose_chart([P_V, P_R], k)
    X_V, X_R = chart_coordinates(P_V, J), chart_coordinates(P_R, J)
    rng = make_rng(seed)
    scale = float(np.linalg.norm(X_V - X_R)) + 1.0

    reports: List[PathReport] = []
    for attempt in range(retries + 1):
        if attempt == 0:
            nodes = [X_V, X_R]
        else:
            waypoint = (X_V + X_R) / 2 + scale * rng.normal(size=X_V.shape)
            nodes = [X_V, waypoint, X_R]
        crossings = []
        for segment, (A, B) in enumerate(zip(nodes, nodes[1:])):
            crossings += track_segment(A, B, J, k, segment, steps)
        report = PathReport(attempt=attempt, outcome=_path_outcome(crossings), crossings=crossings)
        reports.append(report)
        if report.outcome == "clean":
            logger.debug(f"✅ clean path to the reference plane on attempt {attempt}")
            return MembershipVerdict(
                status=MembershipStatus.INTERIOR,
                certificate=Certificate(kind="path", data={
                    "attempt": attempt,
                    "chart": list(J),
                    "reference": R.to_strings(),
                    "waypoints": [n.tolist() for n in nodes[1:-1]],
                }),
                paths=reports,
            )
    if all(r.outcome == "crossed" for r in reports):
        first = [c.model_dump() for c in reports[0].crossings if c.outcome == "genuine"]
        return MembershipVerdict(
            status=MembershipStatus.EXTERIOR,
            certificate=Certificate(kind="crossings", data={"chart": list(J), "crossings": first}),
            paths=reports,
        )
    logger.info(f"⚠️ membership undetermined after {len(reports)} paths")
    return MembershipVerdict(status=MembershipStatus.UNDETERMINED, paths=reports)


def membership_from_preimage(C: TNNPoint, I: Partition, k: int) -> MembershipVerdict:
    """Verdict for the image of a known nonnegative point: boundary by incidence, else interior with the preimage"""
    if not C.verify():
        raise DegenerateInputError("preimage is not totally nonnegative")
    V = amplituhedron_map(C, z_matrix(I, k))
    certificate = boundary_incidence(V)
    if certificate is not None:
        return MembershipVerdict(status=MembershipStatus.BOUNDARY, certificate=certificate)
    if C.level != PositivityLevel.STRICTLY_POSITIVE:
        return MembershipVerdict(status=MembershipStatus.UNDETERMINED)
    return MembershipVerdict(
        status=MembershipStatus.INTERIOR,
        certificate=Certificate(kind="preimage", data={"matrix": C.to_strings(), "partition": I.to_strings()}),
    )
