"""
Scalar arithmetic, univariate polynomials and root isolation
Exact mode works over sympy rationals, float mode over numpy doubles
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import sympy as sp

from config import Config
from exceptions import DimensionError, DomainError, RootIsolationError

logger = logging.getLogger(__name__)

T = sp.Symbol("t")

Scalar = Union[sp.Rational, float]

# degree reported for the zero polynomial
ZERO_DEGREE = -1

UNIT_WINDOW = (sp.Integer(0), sp.Integer(1))


class Mode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


def to_scalar(value, mode: Mode = Mode.EXACT) -> Scalar:
    """Convert ints, Fractions, strings, sympy numbers or floats into a Scalar of the given mode"""
    if mode == Mode.EXACT:
        if isinstance(value, sp.Rational):
            return value
        if isinstance(value, Fraction):
            return sp.Rational(value.numerator, value.denominator)
        if isinstance(value, str):
            return sp.Rational(Fraction(value.strip()))
        if isinstance(value, (int, np.integer)):
            return sp.Integer(int(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(value):
                raise DomainError(f"non-finite value {value} cannot become an exact scalar")
            return sp.Rational(float(value))
        converted = sp.nsimplify(value, rational=True)
        if not isinstance(converted, sp.Rational):
            raise DomainError(f"{value!r} is not a rational number")
        return converted
    result = float(Fraction(value.strip())) if isinstance(value, str) else float(value)
    if not math.isfinite(result):
        raise DomainError(f"non-finite float {result}")
    return result


def is_zero(value, mode: Mode = Mode.EXACT, tol: float = 0.0) -> bool:
    if mode == Mode.EXACT:
        return value == 0
    return abs(value) <= tol


def format_scalar(value) -> str:
    """Exact scalars print as 'a/b', floats with repr precision"""
    if isinstance(value, sp.Rational):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def mode_of(*values) -> Mode:
    for value in values:
        if isinstance(value, (float, np.floating)):
            return Mode.FLOAT
    return Mode.EXACT


# === Matrices ===

def exact_matrix(rows: Sequence[Sequence]) -> sp.Matrix:
    return sp.Matrix([[to_scalar(x, Mode.EXACT) for x in row] for row in rows])


def float_array(rows: Sequence[Sequence]) -> np.ndarray:
    return np.array([[complex(x) if isinstance(x, complex) else float(x) for x in row] for row in rows])


def relative_rank(array: np.ndarray, tol_rank: float = Config.TAU_RANK) -> int:
    """Numerical rank: singular values above tol_rank * sigma_max"""
    if array.size == 0:
        return 0
    sigma = np.linalg.svd(array, compute_uv=False)
    if sigma[0] == 0:
        return 0
    return int(np.sum(sigma > tol_rank * sigma[0]))


def matrix_rank(rows: Sequence[Sequence], mode: Mode = Mode.EXACT, tol_rank: float = Config.TAU_RANK) -> int:
    if len(rows) == 0:
        return 0
    if mode == Mode.EXACT:
        return exact_matrix(rows).rank()
    return relative_rank(float_array(rows), tol_rank)


def determinant(rows: Sequence[Sequence], mode: Mode = Mode.EXACT) -> Scalar:
    if len(rows) == 0:
        return sp.Integer(1) if mode == Mode.EXACT else 1.0
    if any(len(row) != len(rows) for row in rows):
        raise DimensionError("determinant needs a square matrix")
    if mode == Mode.EXACT:
        return exact_matrix(rows).det(method="bareiss")
    return float(np.linalg.det(float_array(rows)))


def nullspace_rows(rows: Sequence[Sequence], mode: Mode = Mode.EXACT,
                   tol_rank: float = Config.TAU_RANK) -> List[Tuple[Scalar, ...]]:
    """Basis of {x : rows . x = 0}, returned as rows

    Exact mode returns the reduced row echelon basis, float mode an orthonormal one.
    """
    if mode == Mode.EXACT:
        vectors = exact_matrix(rows).nullspace()
        if not vectors:
            return []
        stacked = sp.Matrix.vstack(*[v.T for v in vectors])
        reduced, _pivots = stacked.rref()
        basis = []
        for r in range(reduced.rows):
            row = tuple(sp.Rational(x) for x in reduced.row(r))
            if any(x != 0 for x in row):
                basis.append(row)
        return basis
    kernel = scipy.linalg.null_space(float_array(rows), rcond=tol_rank)
    return [tuple(float(x) for x in column) for column in kernel.T]


# === Polynomials ===

@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial, coefficients stored low degree first"""

    coeffs: Tuple[Scalar, ...]
    mode: Mode = Mode.EXACT

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, mode: Mode = Mode.EXACT) -> "UniPoly":
        values = [to_scalar(c, mode) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        return cls(tuple(values), mode)

    @classmethod
    def from_sympy(cls, poly: sp.Poly) -> "UniPoly":
        if poly.is_zero:
            return cls((), Mode.EXACT)
        return cls.from_coeffs(reversed([sp.Rational(c) for c in poly.all_coeffs()]), Mode.EXACT)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else to_scalar(0, self.mode)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_sympy(self) -> sp.Poly:
        if self.mode != Mode.EXACT:
            raise DomainError("float polynomials have no sympy form")
        high_first = list(reversed(self.coeffs)) or [sp.Integer(0)]
        return sp.Poly(high_first, T, domain=sp.QQ)

    def high_first(self) -> np.ndarray:
        return np.array([float(c) for c in reversed(self.coeffs)] or [0.0])

    def monic(self) -> "UniPoly":
        if self.is_zero:
            raise DomainError("zero polynomial has no monic form")
        lead = self.leading
        return UniPoly(tuple(c / lead for c in self.coeffs), self.mode)

    def derivative(self) -> "UniPoly":
        return UniPoly.from_coeffs([i * c for i, c in enumerate(self.coeffs)][1:], self.mode)

    def padded(self, length: int) -> List[Scalar]:
        zero = to_scalar(0, self.mode)
        return list(self.coeffs) + [zero] * (length - len(self.coeffs))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = [f"{format_scalar(c)}*t^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(terms)


def poly_gcd(a: UniPoly, b: UniPoly, tol_root: float = Config.TAU_ROOT) -> UniPoly:
    """Monic gcd; float inputs fall back to root clustering within tol_root"""
    if a.is_zero and b.is_zero:
        raise DomainError("gcd of two zero polynomials is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    if a.mode == Mode.EXACT and b.mode == Mode.EXACT:
        return UniPoly.from_sympy(a.to_sympy().gcd(b.to_sympy())).monic()
    return _approximate_gcd(a, b, tol_root)


def _cluster_radius(z: complex, tol: float) -> float:
    # a double root perturbed by tol splits by about sqrt(tol)
    return max(tol, math.sqrt(tol)) * max(1.0, abs(z))


def _close(x: complex, y: complex, tol: float) -> bool:
    return abs(x - y) <= _cluster_radius(x, tol)


def _approximate_gcd(a: UniPoly, b: UniPoly, tol_root: float) -> UniPoly:
    roots_a = list(np.roots(a.high_first())) if a.degree > 0 else []
    roots_b = list(np.roots(b.high_first())) if b.degree > 0 else []
    common = []
    for r in roots_a:
        if not roots_b:
            break
        gaps = [abs(r - s) for s in roots_b]
        nearest = int(np.argmin(gaps))
        if _close(r, roots_b[nearest], tol_root):
            common.append((r + roots_b.pop(nearest)) / 2)
    if not common:
        return UniPoly((1.0,), Mode.FLOAT)
    high = np.real(np.atleast_1d(np.poly(common)))
    return UniPoly.from_coeffs(reversed(high.tolist()), Mode.FLOAT)


def sylvester_matrix(a: UniPoly, b: UniPoly, formal_degree: int) -> List[List[Scalar]]:
    if formal_degree < max(a.degree, b.degree):
        raise DomainError(
            f"formal degree {formal_degree} below actual degrees ({a.degree}, {b.degree})"
        )
    mode = mode_of(*a.coeffs, *b.coeffs)
    zero = to_scalar(0, mode)
    d = formal_degree
    rows = []
    for poly in (a, b):
        high = list(reversed(poly.padded(d + 1)))
        for shift in range(d):
            rows.append([zero] * shift + high + [zero] * (d - 1 - shift))
    return rows


def sylvester_resultant(a: UniPoly, b: UniPoly, formal_degree: int) -> Scalar:
    """Determinant of the 2d x 2d Sylvester matrix at formal degree d"""
    rows = sylvester_matrix(a, b, formal_degree)
    mode = mode_of(*a.coeffs, *b.coeffs)
    return determinant(rows, mode)


# === Root isolation ===

class RootKind(str, Enum):
    IN_WINDOW = "in-window"
    REAL_OUTSIDE = "real-outside"
    COMPLEX_PAIR = "complex-pair"


@dataclass(frozen=True)
class RootEntry:
    kind: RootKind
    multiplicity: int
    lo: Optional[Scalar] = None
    hi: Optional[Scalar] = None
    approx: complex = 0j

    @property
    def is_exact_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    @property
    def weight(self) -> int:
        """Roots counted by this entry (a conjugate pair counts twice)"""
        return 2 * self.multiplicity if self.kind == RootKind.COMPLEX_PAIR else self.multiplicity


@dataclass(frozen=True)
class RootMultiset:
    entries: Tuple[RootEntry, ...]
    degree: int

    def in_window(self) -> List[RootEntry]:
        return [e for e in self.entries if e.kind == RootKind.IN_WINDOW]

    def total_multiplicity(self) -> int:
        return sum(e.weight for e in self.entries)

    def window_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.in_window())


def _sign_variations(values: Sequence) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _sturm_open(q: sp.Poly, lo, hi) -> int:
    """Distinct roots of a square-free q in the open interval (lo, hi); q(lo), q(hi) nonzero"""
    if q.degree() <= 0:
        return 0
    chain = sp.sturm(q)
    at_lo = _sign_variations([s.eval(lo) for s in chain])
    at_hi = _sign_variations([s.eval(hi) for s in chain])
    return at_lo - at_hi


def _drop_endpoint_roots(q: sp.Poly, window) -> Tuple[sp.Poly, List]:
    hits = []
    for end in dict.fromkeys(window):
        if q.degree() > 0 and q.eval(end) == 0:
            hits.append(end)
            q = q.quo(sp.Poly(T - end, T, domain=sp.QQ))
    return q, hits


def sturm_count(p: UniPoly, window=UNIT_WINDOW) -> int:
    """Number of distinct real roots of p in the closed window, by Sturm sequences"""
    if p.is_zero:
        raise DomainError("zero polynomial has no finite root count")
    lo, hi = (to_scalar(w) for w in window)
    q = p.to_sympy()
    if q.degree() <= 0:
        return 0
    q, hits = _drop_endpoint_roots(q.sqf_part(), (lo, hi))
    return len(hits) + _sturm_open(q, lo, hi)


def _separate(q: sp.Poly, a, b, lo, hi) -> Tuple:
    """Refine an isolating interval until it no longer straddles a window endpoint"""
    for _ in range(500):
        straddles = (a <= lo <= b) or (a <= hi <= b)
        if not straddles or a == b:
            return a, b
        a, b = q.refine_root(a, b, eps=(b - a) / 4)
        a, b = sp.Rational(a), sp.Rational(b)
    raise RootIsolationError(f"could not separate root interval [{a}, {b}] from the window")


def isolate_real_roots(p: UniPoly, window=UNIT_WINDOW, tol_root: float = Config.TAU_ROOT) -> RootMultiset:
    """Classify every root of p: isolated real roots in the window, real roots outside, complex pairs"""
    if p.is_zero:
        raise DomainError("zero polynomial has no isolated roots")
    if p.mode == Mode.FLOAT:
        return _float_roots(p, window, tol_root)

    lo, hi = (to_scalar(w) for w in window)
    entries: List[RootEntry] = []
    _content, factors = p.to_sympy().sqf_list()
    for q, mult in factors:
        if q.degree() <= 0:
            continue
        q, hits = _drop_endpoint_roots(q, (lo, hi))
        for end in hits:
            entries.append(RootEntry(RootKind.IN_WINDOW, mult, end, end, complex(float(end))))
        real_roots = 0
        inside = 0
        if q.degree() > 0:
            for (a, b), _m in q.intervals():
                a, b = _separate(q, sp.Rational(a), sp.Rational(b), lo, hi)
                kind = RootKind.IN_WINDOW if (lo < a and b < hi) else RootKind.REAL_OUTSIDE
                inside += kind == RootKind.IN_WINDOW
                real_roots += 1
                entries.append(RootEntry(kind, mult, a, b, complex(float((a + b) / 2))))
            certified = _sturm_open(q, lo, hi)
            if certified != inside:
                raise RootIsolationError(
                    f"Sturm count {certified} disagrees with {inside} isolated roots in ({lo}, {hi})"
                )
            pairs = (q.degree() - real_roots) // 2
            if pairs:
                numeric = np.roots([float(c) for c in q.all_coeffs()])
                upper = sorted((z for z in numeric if z.imag > 0), key=lambda z: (z.real, z.imag))
                for z in upper[:pairs]:
                    entries.append(RootEntry(RootKind.COMPLEX_PAIR, mult, approx=complex(z)))
    return RootMultiset(tuple(entries), p.degree)


def _float_roots(p: UniPoly, window, tol_root: float) -> RootMultiset:
    lo, hi = (float(w) for w in window)
    roots = sorted(np.roots(p.high_first()), key=lambda z: (z.real, z.imag)) if p.degree > 0 else []
    clusters: List[List[complex]] = []
    for z in roots:
        for cluster in clusters:
            if _close(cluster[0], z, tol_root):
                cluster.append(z)
                break
        else:
            clusters.append([z])
    entries = []
    for cluster in clusters:
        center = complex(np.mean(cluster))
        mult = len(cluster)
        if abs(center.imag) <= _cluster_radius(center, tol_root):
            x = center.real
            inside = lo - tol_root <= x <= hi + tol_root
            kind = RootKind.IN_WINDOW if inside else RootKind.REAL_OUTSIDE
            entries.append(RootEntry(kind, mult, x - tol_root, x + tol_root, complex(x)))
        elif center.imag > 0:
            entries.append(RootEntry(RootKind.COMPLEX_PAIR, mult, approx=center))
    return RootMultiset(tuple(entries), p.degree)
