"""
Boundary stratification of the limit amplituhedron
Intersection divisors, stratum labels, seeded stratum samplers and tangent space checks
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from pydantic import BaseModel

from algebra_core import (
    UNIT_WINDOW,
    Mode,
    RootEntry,
    RootKind,
    format_scalar,
    isolate_real_roots,
    poly_gcd,
    relative_rank,
)
from chowforms import bezout_corank, curve_derivative, curve_point, meets_secant_line, osculating_rows
from config import Config
from exceptions import DegenerateInputError, DomainError, ParameterError, RetryCapExceeded
from grassmann import KPlane, contains_subspace, dual_polynomials, is_bracket_zero, plane_from_primal
from utils import derive_seed, distinct_rationals, make_rng, random_int_rows, random_rational

logger = logging.getLogger(__name__)


# === Intersection divisor ===

class DivisorClass(str, Enum):
    IN_WINDOW = "in-window"
    REAL_OUTSIDE = "real-outside"
    COMPLEX_PAIR = "complex-pair"
    AT_INFINITY = "at-infinity"


_CLASS_OF_KIND = {
    RootKind.IN_WINDOW: DivisorClass.IN_WINDOW,
    RootKind.REAL_OUTSIDE: DivisorClass.REAL_OUTSIDE,
    RootKind.COMPLEX_PAIR: DivisorClass.COMPLEX_PAIR,
}


@dataclass(frozen=True)
class DivisorPoint:
    location: Optional[RootEntry]  # None for the point at infinity
    multiplicity: int
    cls: DivisorClass

    @property
    def weight(self) -> int:
        return 2 * self.multiplicity if self.cls == DivisorClass.COMPLEX_PAIR else self.multiplicity

    def describe(self) -> Dict:
        if self.location is None:
            return {"class": self.cls.value, "multiplicity": self.multiplicity}
        loc = self.location
        if loc.lo is not None:
            where = [format_scalar(loc.lo), format_scalar(loc.hi)]
        else:
            where = [repr(loc.approx.real), repr(loc.approx.imag)]
        return {"class": self.cls.value, "multiplicity": self.multiplicity, "location": where}


@dataclass(frozen=True)
class IntersectionDivisor:
    points: Tuple[DivisorPoint, ...]
    total_degree: int

    def multiplicity_at(self, t) -> int:
        for point in self.points:
            loc = point.location
            if loc is not None and loc.is_exact_point and loc.lo == t:
                return point.multiplicity
        return 0

    def in_window(self) -> List[DivisorPoint]:
        return [p for p in self.points if p.cls == DivisorClass.IN_WINDOW]

    def describe(self) -> Dict:
        return {"total_degree": self.total_degree, "points": [p.describe() for p in self.points]}


def intersection_divisor(V: KPlane, tol_root: float = Config.TAU_ROOT) -> IntersectionDivisor:
    """Common roots of f and g with multiplicity; degree drops of both f and g count as a point at infinity"""
    f, g = dual_polynomials(V)
    h = poly_gcd(f, g, tol_root)
    points: List[DivisorPoint] = []
    if h.degree > 0:
        roots = isolate_real_roots(h, UNIT_WINDOW, tol_root)
        for entry in roots.entries:
            points.append(DivisorPoint(entry, entry.multiplicity, _CLASS_OF_KIND[entry.kind]))
    infinite = min(V.k + 1 - f.degree, V.k + 1 - g.degree)
    if infinite > 0:
        points.append(DivisorPoint(None, infinite, DivisorClass.AT_INFINITY))
    return IntersectionDivisor(tuple(points), sum(p.weight for p in points))


# === Labels and specs ===

class StratumLabel(BaseModel):
    secant_degree: int
    osc0: int
    osc1: int
    meets_s01: bool
    meets_l0: bool
    meets_l1: bool
    claimed_codim: int
    table_codim: int
    name: Optional[str] = None


@dataclass(frozen=True)
class StratumSpec:
    """Planted structure of a stratum: ell = deg D_V, osculation orders (i, j) and one incidence flag

    line means the plane meets L_{0,i} (i >= 1, j = 0) or L_{1,j} (j >= 1, i = 0);
    segment means it meets the line S01 (i = j = 0).
    """

    ell: int
    i: int = 0
    j: int = 0
    line: bool = False
    segment: bool = False

    @property
    def key(self) -> str:
        flag = "-L" if self.line else "-S" if self.segment else ""
        return f"l{self.ell}-i{self.i}-j{self.j}{flag}"

    @property
    def codim(self) -> int:
        return self.ell + self.i + self.j + int(self.line or self.segment)

    @property
    def is_generic(self) -> bool:
        return self.ell == 0 and not self.segment

    @property
    def is_pure_secant(self) -> bool:
        return self.i == 0 and self.j == 0 and not self.segment

    @property
    def planted_rows(self) -> int:
        return self.ell + int(self.line or self.segment)

    def validate(self, k: int):
        if min(self.ell, self.i, self.j) < 0 or self.i + self.j > self.ell or self.ell > k:
            raise ParameterError(f"{self.key}: need 0 <= i + j <= ell <= k = {k}")
        if self.line and not ((self.i >= 1) != (self.j >= 1)):
            raise ParameterError(f"{self.key}: a special line needs osculation at exactly one end")
        if self.segment and (self.i or self.j):
            raise ParameterError(f"{self.key}: the S01 flag only applies without osculation")
        if self.line and self.segment:
            raise ParameterError(f"{self.key}: line and segment flags are exclusive")
        if self.planted_rows > k:
            raise ParameterError(f"{self.key}: planted structure needs {self.planted_rows} > {k} rows")

    def describe(self) -> Dict:
        return {"ell": self.ell, "i": self.i, "j": self.j, "line": self.line, "segment": self.segment}


def spec_of_label(label: StratumLabel) -> StratumSpec:
    i, j = label.osc0, label.osc1
    line = (i >= 1 and j == 0 and label.meets_l0) or (j >= 1 and i == 0 and label.meets_l1)
    segment = i == 0 and j == 0 and label.meets_s01
    return StratumSpec(label.secant_degree, i, j, line, segment)


# Named strata of the k = 2 boundary
K2_STRATA: List[Tuple[str, StratumSpec]] = [
    ("CH(C3)", StratumSpec(1)),
    ("CH(S01)", StratumSpec(0, segment=True)),
    ("Sing CH(C3)", StratumSpec(2)),
    ("S0", StratumSpec(1, 1, 0)),
    ("S1", StratumSpec(1, 0, 1)),
    ("CH(C3) n CH(S01)", StratumSpec(1, segment=True)),
    ("L0", StratumSpec(1, 1, 0, line=True)),
    ("L1", StratumSpec(1, 0, 1, line=True)),
    ("C0", StratumSpec(2, 1, 0)),
    ("C1", StratumSpec(2, 0, 1)),
    ("S01", StratumSpec(2, 1, 1)),
    ("T0", StratumSpec(2, 2, 0)),
    ("T1", StratumSpec(2, 0, 2)),
]

_K2_BY_SPEC = {spec: name for name, spec in K2_STRATA}


def k2_stratum_name(spec: StratumSpec) -> Optional[str]:
    return _K2_BY_SPEC.get(spec)


def admissible_specs(k: int) -> List[StratumSpec]:
    """Every boundary stratum type for Gr(k, k+2), ordered by ell then osculation"""
    specs = []
    for ell in range(k + 1):
        for i in range(ell + 1):
            for j in range(ell - i + 1):
                if i == 0 and j == 0:
                    if ell >= 1:
                        specs.append(StratumSpec(ell))
                    if ell + 1 <= k:
                        specs.append(StratumSpec(ell, segment=True))
                elif i >= 1 and j >= 1:
                    specs.append(StratumSpec(ell, i, j))
                else:
                    specs.append(StratumSpec(ell, i, j))
                    if ell + 1 <= k:
                        specs.append(StratumSpec(ell, i, j, line=True))
    return specs


# === Classification ===

def _osculation_order(V: KPlane, t: int, tol_rank: float) -> int:
    m = 0
    while m < V.k and contains_subspace(V, osculating_rows(t, m + 1, V.k, V.mode), tol_rank):
        m += 1
    return m


def _special_line_rows(k: int, at_zero: bool, order: int, mode: Mode):
    """Spanning rows of L_{0,order} (at_zero) or L_{1,order}"""
    if at_zero:
        return curve_point(1, k, mode), curve_derivative(0, order, k, mode)
    return curve_point(0, k, mode), curve_derivative(1, order, k, mode)


def classify(V: KPlane, tol_rank: float = Config.TAU_RANK) -> StratumLabel:
    ell = bezout_corank(V, tol_rank)
    osc0 = _osculation_order(V, 0, tol_rank)
    osc1 = _osculation_order(V, 1, tol_rank)
    meets_s01 = meets_secant_line(V, tol_rank)
    meets_l0 = osc0 >= 1 and is_bracket_zero(V, *_special_line_rows(V.k, True, osc0, V.mode), tol_rank)
    meets_l1 = osc1 >= 1 and is_bracket_zero(V, *_special_line_rows(V.k, False, osc1, V.mode), tol_rank)
    label = StratumLabel(
        secant_degree=ell, osc0=osc0, osc1=osc1,
        meets_s01=meets_s01, meets_l0=meets_l0, meets_l1=meets_l1,
        claimed_codim=0, table_codim=0,
    )
    spec = spec_of_label(label)
    label.claimed_codim = spec.codim
    # pure secant rows of the stratification table are indexed one step higher
    label.table_codim = ell + 1 if spec.is_pure_secant and ell >= 1 else spec.codim
    if V.k == 2:
        label.name = k2_stratum_name(spec)
    return label


# === Samplers ===

def _stratum_rows(spec: StratumSpec, k: int, nodes: Sequence, coeffs: Optional[Sequence],
                  completion: Sequence[Sequence], mode: Mode) -> List[List]:
    rows = [list(r) for r in osculating_rows(0, spec.i, k, mode)]
    rows += [list(r) for r in osculating_rows(1, spec.j, k, mode)]
    rows += [list(curve_point(s, k, mode)) for s in nodes]
    if spec.line or spec.segment:
        a, b = coeffs
        if spec.segment:
            q1, q2 = curve_point(0, k, mode), curve_point(1, k, mode)
        else:
            q1, q2 = _special_line_rows(k, spec.i >= 1, max(spec.i, spec.j), mode)
        rows.append([a * x + b * y for x, y in zip(q1, q2)])
    rows += [list(r) for r in completion]
    return rows


def sample_stratum(spec: StratumSpec, k: int, seed: int, retries: int = Config.SAMPLER_RETRIES) -> KPlane:
    """Exact plane carrying the planted structure of spec, rejected until classify agrees"""
    spec.validate(k)
    rng = make_rng(seed)
    node_count = spec.ell - spec.i - spec.j
    for attempt in range(retries):
        nodes = distinct_rationals(rng, node_count)
        coeffs = (random_rational(rng), random_rational(rng)) if (spec.line or spec.segment) else None
        completion = random_int_rows(rng, k - spec.planted_rows, k + 2)
        rows = _stratum_rows(spec, k, nodes, coeffs, completion, Mode.EXACT)
        try:
            V = plane_from_primal(rows, Mode.EXACT)
        except DegenerateInputError:
            continue
        if spec_of_label(classify(V)) == spec:
            return V
        logger.debug(f"🔁 {spec.key}: attempt {attempt} missed the planted label")
    raise RetryCapExceeded(f"{spec.key}: no clean sample within {retries} attempts (seed {seed})")


def sample_secant(ell: int, k: int, seed: int) -> KPlane:
    if ell < 0 or ell > k:
        raise ParameterError(f"secant degree {ell} outside 0..{k}")
    return sample_stratum(StratumSpec(ell), k, seed)


def sample_O0(ell: int, j: int, k: int, seed: int) -> KPlane:
    """Contains the j-th osculating plane at gamma(0) and a point of L_{0,j}"""
    if j < 1 or j > ell or ell + 1 > k:
        raise ParameterError(f"O0 sampler needs 1 <= j <= ell < k, got ell={ell}, j={j}, k={k}")
    return sample_stratum(StratumSpec(ell, j, 0, line=True), k, seed)


def sample_O1(ell: int, j: int, k: int, seed: int) -> KPlane:
    if j < 1 or j > ell or ell + 1 > k:
        raise ParameterError(f"O1 sampler needs 1 <= j <= ell < k, got ell={ell}, j={j}, k={k}")
    return sample_stratum(StratumSpec(ell, 0, j, line=True), k, seed)


def sample_Oij(ell: int, i: int, j: int, k: int, seed: int) -> KPlane:
    if i < 1 or j < 1 or i + j > ell or ell > k:
        raise ParameterError(f"O(i,j) sampler needs i, j >= 1 and i + j <= ell <= k, got {ell}, {i}, {j}")
    return sample_stratum(StratumSpec(ell, i, j), k, seed)


# === Tangent spaces ===

class TangentReport(BaseModel):
    stratum: StratumLabel
    numeric_dimension: int
    expected_dimension: int

    @property
    def agrees(self) -> bool:
        return self.numeric_dimension == self.expected_dimension


def _divisor_points_exact(V: KPlane) -> Optional[List[Tuple[sp.Rational, int]]]:
    """Finite divisor points when every one is rational, else None"""
    f, g = dual_polynomials(V)
    h = poly_gcd(f, g)
    if h.degree <= 0:
        return []
    _content, factors = h.to_sympy().factor_list()
    points = []
    for factor, mult in factors:
        if factor.degree() != 1:
            return None
        c1, c0 = factor.all_coeffs()
        points.append((sp.Rational(-c0, c1), mult))
    return points


def _divisor_points_numeric(V: KPlane) -> List[Tuple[complex, int]]:
    f, g = dual_polynomials(V)
    h = poly_gcd(f, g)
    if h.degree <= 0:
        return []
    points = []
    for entry in isolate_real_roots(h, UNIT_WINDOW).entries:
        points.append((entry.approx, entry.multiplicity))
        if entry.kind == RootKind.COMPLEX_PAIR:
            points.append((entry.approx.conjugate(), entry.multiplicity))
    return points


def _complex_derivative(p: complex, order: int, k: int) -> np.ndarray:
    return np.array([
        float(np.prod(np.arange(i - order + 1, i + 1))) * p ** (i - order) if i >= order else 0.0
        for i in range(k + 2)
    ], dtype=complex)


def tangent_dimension_secant(V: KPlane, ell: Optional[int] = None,
                             tol_rank: float = Config.TAU_RANK) -> TangentReport:
    """Dimension of the maps phi: V -> C^{k+2}/V with phi(O^{(m)}(p)) inside O^{(m+1)}(p) + V

    phi is a 2 x k matrix acting on primal coordinates, C^{k+2}/V is read through the dual rows.
    """
    label = classify(V, tol_rank)
    degree = label.secant_degree
    if ell is not None and ell != degree:
        raise DomainError(f"plane has divisor degree {degree}, not on the degree-{ell} stratum")
    f, g = dual_polynomials(V)
    if min(V.k + 1 - f.degree, V.k + 1 - g.degree) > 0:
        raise DomainError("divisor has a point at infinity")

    k = V.k
    exact_points = _divisor_points_exact(V) if V.mode == Mode.EXACT else None
    if exact_points is not None:
        P = sp.Matrix(V.primal)
        dual = sp.Matrix(V.dual)
        gram_inverse = (P * P.T).inv()
        rows = []
        for p, m in exact_points:
            q = dual * sp.Matrix(curve_derivative(p, m, k, Mode.EXACT))
            for r in range(m):
                c = gram_inverse * P * sp.Matrix(curve_derivative(p, r, k, Mode.EXACT))
                rows.append([q[1] * x for x in c] + [-q[0] * x for x in c])
        rank = sp.Matrix(rows).rank() if rows else 0
    else:
        P = V.primal_array()
        dual = V.dual_array()
        gram = P @ P.T
        rows = []
        for p, m in _divisor_points_numeric(V):
            q = dual @ _complex_derivative(p, m, k)
            for r in range(m):
                c = np.linalg.solve(gram, P @ _complex_derivative(p, r, k))
                rows.append(np.concatenate([q[1] * c, -q[0] * c]))
        rank = relative_rank(np.array(rows), tol_rank) if rows else 0
    return TangentReport(stratum=label, numeric_dimension=2 * k - rank, expected_dimension=2 * k - degree)


def singularity_witness(V: KPlane, ell: int, tol_rank: float = Config.TAU_RANK) -> bool:
    """True iff V is a singular point of Sec^ell, i.e. lies on Sec^{ell+1}"""
    corank = bezout_corank(V, tol_rank)
    if corank < ell:
        raise DomainError(f"plane has corank {corank}, not on Sec^{ell}")
    return corank >= ell + 1


# === Nesting ===

def satisfies(V: KPlane, spec: StratumSpec, tol_rank: float = Config.TAU_RANK) -> bool:
    """Defining conditions of the closure of the stratum of spec"""
    k, mode = V.k, V.mode
    if bezout_corank(V, tol_rank) < spec.ell:
        return False
    if spec.i and not contains_subspace(V, osculating_rows(0, spec.i, k, mode), tol_rank):
        return False
    if spec.j and not contains_subspace(V, osculating_rows(1, spec.j, k, mode), tol_rank):
        return False
    if spec.segment and not meets_secant_line(V, tol_rank):
        return False
    if spec.line:
        at_zero = spec.i >= 1
        order = spec.i if at_zero else spec.j
        if not is_bracket_zero(V, *_special_line_rows(k, at_zero, order, mode), tol_rank):
            return False
    return True


def _drop_order(spec: StratumSpec, at_zero: bool) -> StratumSpec:
    i, j = (spec.i - 1, spec.j) if at_zero else (spec.i, spec.j - 1)
    if i == 0 and j == 0:
        return StratumSpec(spec.ell, segment=True)
    if (i >= 1) != (j >= 1):
        return StratumSpec(spec.ell, i, j, line=True)
    return StratumSpec(spec.ell, i, j)


def coarser_specs(spec: StratumSpec) -> List[StratumSpec]:
    """Strata whose singular locus contains the stratum of spec"""
    out: List[StratumSpec] = []

    def add(candidate: StratumSpec):
        if candidate.i + candidate.j <= candidate.ell and not candidate.is_generic \
                and candidate != spec and candidate not in out:
            out.append(candidate)

    if spec.ell >= 1:
        add(StratumSpec(spec.ell - 1, spec.i, spec.j, spec.line, spec.segment))
    if spec.i >= 1:
        add(_drop_order(spec, True))
    if spec.j >= 1:
        add(_drop_order(spec, False))
    if spec.i >= 1 and spec.j >= 1:
        add(StratumSpec(spec.ell, spec.i, 0, line=True))
        add(StratumSpec(spec.ell, 0, spec.j, line=True))
    return out


# === Local dimension ===

def _parameter_layout(spec: StratumSpec, k: int) -> Tuple[int, int, int]:
    nodes = spec.ell - spec.i - spec.j
    coeffs = 2 if (spec.line or spec.segment) else 0
    completion = (k - spec.planted_rows) * (k + 2)
    return nodes, coeffs, completion


def _minor_vector(spec: StratumSpec, k: int, theta: np.ndarray) -> np.ndarray:
    n_nodes, n_coeffs, _ = _parameter_layout(spec, k)
    nodes = [float(x) for x in theta[:n_nodes]]
    coeffs = [float(x) for x in theta[n_nodes:n_nodes + n_coeffs]] or None
    completion = theta[n_nodes + n_coeffs:].reshape(k - spec.planted_rows, k + 2)
    P = np.array(_stratum_rows(spec, k, nodes, coeffs, completion.tolist(), Mode.FLOAT), dtype=float)
    return np.array([np.linalg.det(P[:, cols]) for cols in itertools.combinations(range(k + 2), k)])


def stratum_local_dimension(spec: StratumSpec, k: int, seed: int, step: float = 1e-6,
                            tol_rank: float = 1e-6) -> int:
    """Rank of the sampler's Jacobian into normalized Pluecker coordinates, by central differences"""
    spec.validate(k)
    rng = make_rng(derive_seed(seed, "local-dimension", spec.key))
    n_nodes, n_coeffs, n_completion = _parameter_layout(spec, k)
    theta = np.concatenate([
        np.sort(rng.uniform(0.15, 0.85, n_nodes)),
        rng.uniform(0.5, 1.5, n_coeffs),
        rng.normal(size=n_completion),
    ])
    base = _minor_vector(spec, k, theta)
    pivot = int(np.argmax(np.abs(base)))

    def chart(t: np.ndarray) -> np.ndarray:
        minors = _minor_vector(spec, k, t)
        return np.delete(minors / minors[pivot], pivot)

    columns = []
    for idx in range(theta.size):
        shift = np.zeros_like(theta)
        shift[idx] = step
        columns.append((chart(theta + shift) - chart(theta - shift)) / (2 * step))
    if not columns:
        return 0
    return relative_rank(np.array(columns).T, tol_rank)
