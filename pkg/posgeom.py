"""
Positive geometry of the limit amplituhedron
Canonical form in affine charts, residues at k = 1, simple poles, adjoint degrees and the 1-skeleton
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from pydantic import BaseModel
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from algebra_core import Mode, determinant, format_scalar, to_scalar
from amplituhedron import chart_chow_values, chart_coordinates, choose_chart
from chowforms import bezout_entries_from_dual, chow_form_curve, chow_form_secant, curve_point, osculating_rows
from config import Config
from exceptions import DomainError, ParameterError, PoleError
from grassmann import KPlane, contains_subspace, plane_from_pair, plane_from_primal
from strata import StratumSpec, sample_stratum, satisfies
from utils import derive_seed, make_rng, random_rational

logger = logging.getLogger(__name__)

K1_CHART = (0,)  # affine chart (1, x, y) of P^2


# === Canonical form ===

def default_chart(k: int) -> Tuple[int, ...]:
    return tuple(range(2, k + 2))


def chart_representatives(X: Sequence[Sequence], J: Sequence[int], k: int, one=1, zero=0):
    """Primal rows with the identity on J and X on the complement, and the matching dual pair"""
    comp = [c for c in range(k + 2) if c not in J]
    primal = [[zero] * (k + 2) for _ in range(k)]
    for s in range(k):
        primal[s][J[s]] = one
        for a in range(2):
            primal[s][comp[a]] = X[s][a]
    dual = [[zero] * (k + 2) for _ in range(2)]
    for a in range(2):
        dual[a][comp[a]] = one
        for s in range(k):
            dual[a][J[s]] = -X[s][a]
    return primal, dual


def chart_form_expressions(k: int, J: Optional[Sequence[int]] = None):
    """Chart symbols and the two boundary polynomials CF(C_{k+1}), <A gamma(0) gamma(1)> in them"""
    J = tuple(J) if J is not None else default_chart(k)
    symbols = [[sp.Symbol(f"x_{s}_{a}") for a in range(2)] for s in range(k)]
    if k == 1 and J == K1_CHART:
        symbols = [[sp.Symbol("x"), sp.Symbol("y")]]
    primal, dual = chart_representatives(symbols, J, k, sp.Integer(1), sp.Integer(0))
    curve = sp.expand(sp.Matrix(bezout_entries_from_dual(dual)).det())
    ends = [list(curve_point(0, k, Mode.EXACT)), list(curve_point(1, k, Mode.EXACT))]
    secant = sp.expand(sp.Matrix(primal + ends).det())
    return symbols, curve, secant


class CanonicalFormValue(BaseModel):
    chart: List[int]
    coordinates: List[List[Any]]
    numerator: Any
    curve_factor: Any
    secant_factor: Any
    value: Any

    def describe(self) -> Dict:
        return {
            "chart": self.chart,
            "coordinates": [[format_scalar(x) for x in row] for row in self.coordinates],
            "numerator": format_scalar(self.numerator),
            "curve_factor": format_scalar(self.curve_factor),
            "secant_factor": format_scalar(self.secant_factor),
            "value": format_scalar(self.value),
        }


def canonical_form_eval(V: KPlane, chart: Optional[Sequence[int]] = None, c=1,
                        tol: float = Config.TAU_ORTHO) -> CanonicalFormValue:
    """c / (CF(C_{k+1}) CF(S01)) at the chart coordinates of V; raises PoleError on either hypersurface"""
    k = V.k
    J = tuple(chart) if chart is not None else default_chart(k)
    comp = [col for col in range(k + 2) if col not in J]
    if V.mode == Mode.EXACT:
        P = sp.Matrix(V.primal)
        block = P[:, list(J)]
        if block.det() == 0:
            raise DomainError(f"plane lies outside the chart {list(J)}")
        N = block.inv() * P
        X = [[N[s, comp[a]] for a in range(2)] for s in range(k)]
        one, zero = sp.Integer(1), sp.Integer(0)
    else:
        P = V.primal_array()
        if abs(np.linalg.det(P[:, list(J)])) <= tol:
            raise DomainError(f"plane lies outside the chart {list(J)}")
        X = chart_coordinates(P, J).tolist()
        one, zero = 1.0, 0.0
    primal, dual = chart_representatives(X, J, k, one, zero)
    chart_plane = plane_from_pair(primal, dual, V.mode)
    curve = chow_form_curve(chart_plane)
    secant = chow_form_secant(chart_plane)
    numerator = to_scalar(c, V.mode)
    for name, factor in (("curve", curve), ("secant", secant)):
        if (V.mode == Mode.EXACT and factor == 0) or (V.mode == Mode.FLOAT and abs(factor) <= tol):
            raise PoleError(name)
    return CanonicalFormValue(
        chart=list(J), coordinates=X, numerator=numerator,
        curve_factor=curve, secant_factor=secant, value=numerator / (curve * secant),
    )


# === k = 1 residues ===

def _restricted_to_chord(c):
    """Omega restricted to the chord: residue of (c / CF(C)) dx dy / CF(S01) along CF(S01) = 0"""
    (symbols,), curve, secant = chart_form_expressions(1, K1_CHART)
    x, y = symbols
    on_chord = sp.solve(secant, y)[0]
    restricted = sp.cancel((to_scalar(c) / curve / sp.diff(secant, y)).subs(y, on_chord))
    return x, restricted


def residue_k1(c=1) -> Tuple[sp.Rational, sp.Rational]:
    """Residues of the chord residue form at gamma(0) and gamma(1)"""
    x, restricted = _restricted_to_chord(c)
    return sp.Rational(sp.residue(restricted, x, 0)), sp.Rational(sp.residue(restricted, x, 1))


def residue_k1_numeric(c=1, radius: float = Config.POLE_RADIUS,
                       points: int = Config.CONTOUR_POINTS) -> Tuple[float, float]:
    """Trapezoid rule on circles of the given radius around both vertices"""
    x, restricted = _restricted_to_chord(c)
    h = sp.lambdify(x, restricted, "numpy")
    theta = 2 * np.pi * np.arange(points) / points
    circle = radius * np.exp(1j * theta)
    values = []
    for vertex in (0.0, 1.0):
        values.append(float(np.real(np.mean(h(vertex + circle) * circle))))
    return values[0], values[1]


# === Simple poles ===

class PoleDriftReport(BaseModel):
    k: int
    factor: str
    epsilons: List[float]
    ratios: List[float]
    drift: float
    ok: bool


def _transversal_direction(X0: np.ndarray, J, k: int, which: int, rng, step: float = 1e-6) -> np.ndarray:
    """Unit gradient of the vanishing factor tilted by a random unit vector of half its length"""
    grad = np.zeros_like(X0)
    for idx in np.ndindex(X0.shape):
        shift = np.zeros_like(X0)
        shift[idx] = step
        plus = chart_chow_values((X0 + shift)[None], J, k)[which][0]
        minus = chart_chow_values((X0 - shift)[None], J, k)[which][0]
        grad[idx] = (plus - minus) / (2 * step)
    noise = rng.normal(size=X0.shape)
    u = grad / np.linalg.norm(grad) + 0.5 * noise / np.linalg.norm(noise)
    return u / np.linalg.norm(u)


def simple_pole_drift(k: int, factor: str, seed: int,
                      epsilons: Sequence[float] = Config.POLE_DECADES) -> PoleDriftReport:
    """eps * Omega along a random transversal line through a generic point of one boundary hypersurface"""
    if factor == "curve":
        spec = StratumSpec(1)
    elif factor == "secant":
        spec = StratumSpec(0, segment=True)
    else:
        raise ParameterError(f"unknown boundary factor {factor!r}")
    V = sample_stratum(spec, k, derive_seed(seed, "pole", factor))
    P = V.primal_array()
    J = choose_chart([P], k)
    X0 = chart_coordinates(P, J)
    which = 0 if factor == "curve" else 1
    u = _transversal_direction(X0, J, k, which, make_rng(derive_seed(seed, "direction", factor)))
    ratios = []
    for eps in epsilons:
        F, G = chart_chow_values((X0 + eps * u)[None], J, k)
        ratios.append(float(eps / (F[0] * G[0])))
    last = ratios[-1]
    drift = max(abs(r - last) for r in ratios) / abs(last)
    return PoleDriftReport(
        k=k, factor=factor, epsilons=list(epsilons), ratios=ratios,
        drift=drift, ok=bool(drift < Config.MAX_POLE_DRIFT),
    )


# === Adjoint ===

class AdjointReport(BaseModel):
    k: int
    canonical_degree: int
    boundary_degrees: List[int]
    adjoint_degree: int
    samples: int
    curve_homogeneity_ok: bool
    secant_homogeneity_ok: bool


def adjoint_check(k: int, samples: int, seed: int) -> AdjointReport:
    """Degree bookkeeping for the adjoint, backed by homogeneity of both boundary forms on random planes"""
    if k < 1:
        raise ParameterError("k must be positive")
    boundary = [k + 1, 1]
    curve_ok = secant_ok = True
    for index in range(samples):
        V = sample_stratum(StratumSpec(0), k, derive_seed(seed, "adjoint", k, index))
        lam = random_rational(make_rng(derive_seed(seed, "scale", k, index)), 2, 5)
        scaled_dual = [[lam * x for x in V.dual[0]], list(V.dual[1])]
        W = plane_from_pair(V.primal, scaled_dual)
        curve_ok &= chow_form_curve(W) == lam ** boundary[0] * chow_form_curve(V)
        scaled_primal = [[lam * x for x in V.primal[0]]] + [list(r) for r in V.primal[1:]]
        U = plane_from_pair(scaled_primal, V.dual)
        secant_ok &= chow_form_secant(U) == lam ** boundary[1] * chow_form_secant(V)
    canonical = -(k + 2)
    return AdjointReport(
        k=k, canonical_degree=canonical, boundary_degrees=boundary,
        adjoint_degree=sum(boundary) + canonical, samples=samples,
        curve_homogeneity_ok=bool(curve_ok), secant_homogeneity_ok=bool(secant_ok),
    )


# === 1-skeleton ===

@dataclass
class SkeletonEdge:
    name: str
    spec: StratumSpec
    endpoints: Tuple[int, int]


@dataclass
class SkeletonGraph:
    k: int
    vertex_names: List[str]
    vertex_orders: List[Tuple[int, int]]
    vertices: List[KPlane]
    edges: List[SkeletonEdge] = field(default_factory=list)

    def adjacency(self) -> csr_matrix:
        size = len(self.vertices)
        rows = [e.endpoints[0] for e in self.edges] + [e.endpoints[1] for e in self.edges]
        cols = [e.endpoints[1] for e in self.edges] + [e.endpoints[0] for e in self.edges]
        return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))

    def is_connected(self) -> bool:
        count, _labels = connected_components(self.adjacency(), directed=False)
        return count == 1

    def containments_ok(self) -> bool:
        """Each vertex holds the osculating planes of its orders, exactly"""
        for V, (a, b) in zip(self.vertices, self.vertex_orders):
            if a and not contains_subspace(V, osculating_rows(0, a, self.k, Mode.EXACT)):
                return False
            if b and not contains_subspace(V, osculating_rows(1, b, self.k, Mode.EXACT)):
                return False
        return True

    def endpoints_ok(self) -> bool:
        return all(
            satisfies(self.vertices[v], edge.spec)
            for edge in self.edges for v in edge.endpoints
        )

    def describe(self) -> Dict:
        return {
            "k": self.k,
            "vertices": self.vertex_names,
            "edges": [
                {"name": e.name, "stratum": e.spec.describe(),
                 "endpoints": [self.vertex_names[v] for v in e.endpoints]}
                for e in self.edges
            ],
        }


def skeleton_vertex(a: int, b: int, k: int) -> KPlane:
    """The k-space spanned by O^{(a)}(gamma(0)) and O^{(b)}(gamma(1)), a + b = k"""
    if a + b != k or a < 0 or b < 0:
        raise ParameterError(f"vertex orders ({a}, {b}) must add up to {k}")
    rows = osculating_rows(0, a, k, Mode.EXACT) + osculating_rows(1, b, k, Mode.EXACT)
    return plane_from_primal(rows, Mode.EXACT)


def _vertex_name(a: int, b: int, k: int) -> str:
    if k == 1:
        return "gamma(0)" if a == 1 else "gamma(1)"
    if k == 2:
        return {2: "T0", 1: "S01", 0: "T1"}[a]
    return f"P({a},{b})"


def one_skeleton(k: int) -> SkeletonGraph:
    """Vertices P(a, k-a), listed from a = k down to 0, and the one-dimensional strata joining them"""
    if k < 1:
        raise ParameterError("k must be positive")
    orders = [(a, k - a) for a in range(k, -1, -1)]
    graph = SkeletonGraph(
        k=k,
        vertex_names=[_vertex_name(a, b, k) for a, b in orders],
        vertex_orders=orders,
        vertices=[skeleton_vertex(a, b, k) for a, b in orders],
    )

    def index(a: int) -> int:
        return k - a

    if k == 1:
        graph.edges = [
            SkeletonEdge("arc", StratumSpec(1), (0, 1)),
            SkeletonEdge("chord", StratumSpec(0, segment=True), (0, 1)),
        ]
    elif k == 2:
        graph.edges = [
            SkeletonEdge("L0", StratumSpec(1, 1, 0, line=True), (0, 1)),
            SkeletonEdge("C0", StratumSpec(2, 1, 0), (0, 1)),
            SkeletonEdge("L1", StratumSpec(1, 0, 1, line=True), (1, 2)),
            SkeletonEdge("C1", StratumSpec(2, 0, 1), (1, 2)),
        ]
    else:
        edges = [SkeletonEdge(f"O^{k}({k - 1},0)", StratumSpec(k, k - 1, 0), (index(k), index(k - 1)))]
        for a in range(k - 2, 0, -1):
            b = k - 1 - a
            edges.append(SkeletonEdge(f"O^{k}({a},{b})", StratumSpec(k, a, b), (index(a + 1), index(a))))
        edges.append(SkeletonEdge(f"O^{k}(0,{k - 1})", StratumSpec(k, 0, k - 1), (index(1), index(0))))
        graph.edges = edges
    logger.debug(f"🕸️ skeleton for k={k}: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
    return graph
