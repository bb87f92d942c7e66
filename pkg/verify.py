"""
Seeded verification suites with machine-readable reports
Every case gets its own seed derived from (seed, suite, key, index); failures keep their full inputs for replay
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import sympy as sp
from pydantic import BaseModel, Field

from algebra_core import Mode
from amplituhedron import (
    MembershipStatus, Partition, boundary_family_sample, boundary_incidence, choose_chart, membership,
)
from chowforms import curve_point, meets_secant_line
from config import Config
from exceptions import DegenerateInputError, ParameterError, PoleError, RetryCapExceeded
from grassmann import KPlane, as_mode, bracket, plane_from_primal
from posgeom import (
    adjoint_check, canonical_form_eval, one_skeleton, residue_k1, residue_k1_numeric, simple_pole_drift,
)
from services.sample_runner import SampleRunner
from strata import (
    K2_STRATA, StratumSpec, admissible_specs, classify, coarser_specs, sample_stratum, satisfies,
    singularity_witness, spec_of_label, stratum_local_dimension, tangent_dimension_secant,
)
from utils import derive_seed, make_rng, random_int_rows, random_rational

logger = logging.getLogger(__name__)

SUITE_NAMES = ("algebraic-boundary", "residual-arrangement", "stratification", "canonical-form")


# === Reports ===

class SuiteSettings(BaseModel):
    """Arithmetic and tolerances handed to the oracles; samplers always plant exactly"""

    mode: Mode = Mode.EXACT
    tol_rank: float = Config.TAU_RANK
    tol_root: float = Config.TAU_ROOT
    pole_radius: float = Config.POLE_RADIUS


class FailureExemplar(BaseModel):
    suite: str
    k: Optional[int]
    seed: int
    index: int
    case_seed: int
    key: str
    spec: Optional[Dict[str, Any]] = None
    plane: Optional[List[List[str]]] = None
    verdict: Optional[str] = None
    reason: str = ""


class SuiteReport(BaseModel):
    suite: str
    k: Optional[int]
    seed: int
    samples: int
    requested: int
    settings: SuiteSettings = Field(default_factory=SuiteSettings)
    completed: int = 0
    passed: int = 0
    failed: int = 0
    undetermined: int = 0
    undetermined_cases: List[int] = Field(default_factory=list)
    failures: List[FailureExemplar] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)
    wall_time: float = 0.0

    def payload(self) -> Dict[str, Any]:
        """Everything except the wall clock; identical for identical runs"""
        return self.model_dump(mode="json", exclude={"wall_time"})

    @property
    def undetermined_rate(self) -> float:
        return self.undetermined / self.completed if self.completed else 0.0

    @property
    def ok(self) -> bool:
        checks = self.details.get("checks", {})
        return (
            self.failed == 0
            and self.undetermined_rate <= Config.MAX_UNDETERMINED_RATE
            and all(checks.values())
        )

    def diagnostics(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "k": self.k,
            "seed": self.seed,
            "undetermined_rate": self.undetermined_rate,
            "undetermined_cases": self.undetermined_cases,
            "failures": [f.model_dump() for f in self.failures],
            "checks": self.details.get("checks", {}),
        }


@dataclass
class CaseOutcome:
    status: str  # "pass", "fail" or "undetermined"
    reason: str = ""
    spec: Optional[StratumSpec] = None
    plane: Optional[KPlane] = None
    verdict: Optional[str] = None
    detail: Dict[str, Any] = field(default_factory=dict)


def _passed(spec=None, plane=None, verdict=None, **detail) -> CaseOutcome:
    return CaseOutcome("pass", spec=spec, plane=plane, verdict=verdict, detail=detail)


def _failed(reason: str, spec=None, plane=None, verdict=None, **detail) -> CaseOutcome:
    return CaseOutcome("fail", reason, spec, plane, verdict, detail)


@dataclass
class Suite:
    name: str
    cases: Callable[[Optional[int], int], List[str]]
    check: Callable[[Optional[int], str, int, int, int, SuiteSettings], CaseOutcome]
    summarize: Callable[[Optional[int], int, List[Tuple[str, CaseOutcome]]], Dict[str, Any]]
    max_k: Optional[int] = None
    uses_k: bool = True


def _member(V: KPlane, case_seed: int, s: SuiteSettings):
    W = as_mode(V, s.mode, s.tol_rank)
    return membership(W, seed=derive_seed(case_seed, "paths"), tol_rank=s.tol_rank, tol_root=s.tol_root)


# === algebraic-boundary ===

def _smallest_facet_depth(k: int) -> int:
    depth = 1
    while 2 ** depth + 1 <= k + 2:
        depth += 1
    return depth


def _distance_to_span(P: np.ndarray, x: np.ndarray) -> float:
    q, _r = np.linalg.qr(P.T)
    u = x / np.linalg.norm(x)
    return float(np.linalg.norm(u - q @ (q.T @ u)))


def _check_facet(k: int, index: int, case_seed: int) -> CaseOutcome:
    """Facet samples hug the curve as the partition refines; the wrapped facet meets S01 exactly"""
    first = _smallest_facet_depth(k)
    depth = first + (index // 3) % (Config.REFINEMENT_DEPTH - first + 1)
    I = Partition.dyadic(depth)
    rng = make_rng(derive_seed(case_seed, "facet"))
    i = int(rng.integers(1, I.n + 1))
    A = boundary_family_sample(i, I, k, derive_seed(case_seed, "family"))
    if i == I.n:
        if not meets_secant_line(A):
            return _failed("wrapped facet sample misses the line S01", plane=A, depth=depth)
        return _passed(plane=A, depth=depth, facet=i)
    Zi, Zj = curve_point(I.values[i - 1], k), curve_point(I.values[i], k)
    if bracket(A, Zi, Zj) != 0:
        return _failed(f"facet bracket <A Z_{i} Z_{i + 1}> is nonzero", plane=A, depth=depth)
    t = float(I.values[i - 1]) + float(rng.uniform()) * 2.0 ** -depth
    distance = _distance_to_span(A.primal_array(), np.array(curve_point(t, k, None), dtype=float))
    bound = (k + 2) ** 2 * 2.0 ** -depth
    if distance > bound:
        return _failed(f"gamma({t:.6g}) at distance {distance:.3e} > {bound:.3e}", plane=A, depth=depth)
    return _passed(plane=A, depth=depth, facet=i, distance=distance)


def _check_hypersurface(k: int, index: int, case_seed: int, s: SuiteSettings) -> CaseOutcome:
    spec = StratumSpec(1) if (index // 3) % 2 == 0 else StratumSpec(0, segment=True)
    V = sample_stratum(spec, k, case_seed)
    verdict = _member(V, case_seed, s)
    if verdict.status != MembershipStatus.BOUNDARY:
        return _failed("incidence in [0,1] without a boundary verdict", spec, V, verdict.status.value)
    return _passed(spec, V, verdict.status.value)


def _plane_through_outside_point(k: int, case_seed: int) -> Tuple[KPlane, Any]:
    """gamma(s) with s outside [0,1] plus a random completion, and no other incidence"""
    rng = make_rng(case_seed)
    for _attempt in range(Config.SAMPLER_RETRIES):
        s = random_rational(rng, 1, 3) if rng.integers(0, 2) else random_rational(rng, -2, 0)
        rows = [list(curve_point(s, k))] + random_int_rows(rng, k - 1, k + 2)
        try:
            V = plane_from_primal(rows)
        except DegenerateInputError:
            continue
        if spec_of_label(classify(V)) == StratumSpec(1):
            return V, s
    raise RetryCapExceeded(f"no clean outside-incidence plane within {Config.SAMPLER_RETRIES} attempts")


def _check_outside(k: int, index: int, case_seed: int, s: SuiteSettings) -> CaseOutcome:
    V, t = _plane_through_outside_point(k, case_seed)
    W = as_mode(V, s.mode, s.tol_rank)
    if boundary_incidence(W, s.tol_root, s.tol_rank) is not None:
        return _failed(f"incidence at s={t} certified as boundary", plane=V)
    verdict = _member(V, case_seed, s)
    if verdict.status == MembershipStatus.BOUNDARY:
        return _failed(f"incidence at s={t} got a boundary verdict", plane=V, verdict=verdict.status.value)
    if verdict.status == MembershipStatus.UNDETERMINED:
        return CaseOutcome("undetermined", plane=V, verdict=verdict.status.value)
    return _passed(plane=V, verdict=verdict.status.value, s=str(t))


_BOUNDARY_KINDS = ("facet", "hypersurface", "outside")


def _boundary_cases(k: Optional[int], samples: int) -> List[str]:
    return [_BOUNDARY_KINDS[i % 3] for i in range(samples)]


def _boundary_check(k: Optional[int], key: str, index: int, case_seed: int, samples: int,
                    s: SuiteSettings) -> CaseOutcome:
    if key == "facet":
        return _check_facet(k, index, case_seed)
    if key == "hypersurface":
        return _check_hypersurface(k, index, case_seed, s)
    return _check_outside(k, index, case_seed, s)


def _boundary_summary(k, samples, outcomes) -> Dict[str, Any]:
    depths = sorted({o.detail["depth"] for key, o in outcomes if key == "facet" and "depth" in o.detail})
    verdicts: Dict[str, int] = {}
    for key, o in outcomes:
        if key == "outside" and o.verdict:
            verdicts[o.verdict] = verdicts.get(o.verdict, 0) + 1
    return {"facet_depths": depths, "outside_verdicts": verdicts}


# === residual-arrangement ===

def _residual_cases(k: Optional[int], samples: int) -> List[str]:
    return [spec.key for spec in admissible_specs(k) for _ in range(samples)]


def _spec_by_key(k: int, key: str) -> StratumSpec:
    for spec in admissible_specs(k):
        if spec.key == key:
            return spec
    raise ParameterError(f"no stratum {key!r} for k={k}")


def _residual_check(k: Optional[int], key: str, index: int, case_seed: int, samples: int,
                    s: SuiteSettings) -> CaseOutcome:
    spec = _spec_by_key(k, key)
    V = sample_stratum(spec, k, case_seed)
    if spec_of_label(classify(V, s.tol_rank)) != spec:
        return _failed("sample lost its planted label", spec, V)
    verdict = _member(V, case_seed, s)
    if verdict.status == MembershipStatus.UNDETERMINED:
        return CaseOutcome("undetermined", spec=spec, plane=V, verdict=verdict.status.value)
    if not verdict.status.is_member:
        certificate = verdict.certificate.model_dump() if verdict.certificate else {}
        return _failed("exterior verdict on a boundary stratum", spec, V, verdict.status.value,
                       certificate=certificate)
    return _passed(spec, V, verdict.status.value)


def _residual_summary(k, samples, outcomes) -> Dict[str, Any]:
    per_stratum: Dict[str, Dict[str, int]] = {}
    for key, o in outcomes:
        counts = per_stratum.setdefault(key, {})
        label = o.verdict or o.status
        counts[label] = counts.get(label, 0) + 1
    return {"strata": len(admissible_specs(k)), "per_stratum": per_stratum}


# === stratification ===

def _stratification_check(k: Optional[int], key: str, index: int, case_seed: int, samples: int,
                          s: SuiteSettings) -> CaseOutcome:
    spec = _spec_by_key(k, key)
    V = sample_stratum(spec, k, case_seed)
    W = as_mode(V, s.mode, s.tol_rank)
    label = classify(W, s.tol_rank)
    if spec_of_label(label) != spec:
        return _failed("sample lost its planted label", spec, V)
    for coarser in coarser_specs(spec):
        if not satisfies(W, coarser, s.tol_rank):
            return _failed(f"not inside the closure of {coarser.key}", spec, V)
    if spec.is_pure_secant:
        report = tangent_dimension_secant(W, spec.ell, s.tol_rank)
        if not report.agrees:
            return _failed(
                f"tangent dimension {report.numeric_dimension} != {report.expected_dimension}", spec, V)
        if spec.ell >= 2 and not singularity_witness(W, spec.ell - 1, s.tol_rank):
            return _failed(f"not flagged singular on Sec^{spec.ell - 1}", spec, V)
        if singularity_witness(W, spec.ell, s.tol_rank):
            return _failed(f"flagged singular on its own secant stratum Sec^{spec.ell}", spec, V)
    dimension = stratum_local_dimension(spec, k, case_seed)
    if dimension != 2 * k - spec.codim:
        return _failed(f"local dimension {dimension} != {2 * k - spec.codim}", spec, V)
    return _passed(spec, V, name=label.name)


def _stratification_summary(k, samples, outcomes) -> Dict[str, Any]:
    details: Dict[str, Any] = {"strata": len(admissible_specs(k))}
    if k == 2:
        inventory = {name: 0 for name, _spec in K2_STRATA}
        for _key, o in outcomes:
            name = o.detail.get("name")
            if o.status == "pass" and name in inventory:
                inventory[name] += 1
        details["k2_inventory"] = inventory
        details["checks"] = {"k2_inventory_complete": all(inventory.values())}
    return details


# === canonical-form ===

_CANONICAL_CASES = (
    ["residue-k1", "contour-k1", "pole-eval-k1", "pole-eval-k2"]
    + [f"drift-{factor}-k{k}" for k in (1, 2) for factor in ("curve", "secant")]
    + [f"adjoint-k{k}" for k in range(1, 5)]
    + [f"skeleton-k{k}" for k in range(1, 5)]
)


def _canonical_cases(k: Optional[int], samples: int) -> List[str]:
    return list(_CANONICAL_CASES)


def _check_pole_eval(k: int, case_seed: int) -> CaseOutcome:
    V = sample_stratum(StratumSpec(1), k, derive_seed(case_seed, "curve"))
    try:
        canonical_form_eval(V, choose_chart([V.primal_array()], k))
        return _failed("no pole on CH(C)", plane=V)
    except PoleError as e:
        if e.factor != "curve":
            return _failed(f"pole attributed to the {e.factor} factor", plane=V)
    W = sample_stratum(StratumSpec(0), k, derive_seed(case_seed, "generic"))
    value = canonical_form_eval(W, choose_chart([W.primal_array()], k))
    if value.value == 0:
        return _failed("canonical form vanished at a generic plane", plane=W)
    return _passed(plane=W, value=value.describe()["value"])


def _canonical_check(k: Optional[int], key: str, index: int, case_seed: int, samples: int,
                     s: SuiteSettings) -> CaseOutcome:
    name, order = key.rsplit("-k", 1)
    kk = int(order)
    if name == "residue":
        pair = residue_k1(1)
        if pair != (sp.Integer(1), sp.Integer(-1)):
            return _failed(f"residues {pair}")
        return _passed(residues=[str(r) for r in pair])
    if name == "contour":
        pair = residue_k1_numeric(1, radius=s.pole_radius)
        if abs(pair[0] - 1) > 1e-6 or abs(pair[1] + 1) > 1e-6:
            return _failed(f"contour residues {pair}")
        return _passed(residues=list(pair), radius=s.pole_radius)
    if name == "pole-eval":
        return _check_pole_eval(kk, case_seed)
    if name.startswith("drift-"):
        report = simple_pole_drift(kk, name.split("-", 1)[1], case_seed)
        if not report.ok:
            return _failed(f"pole drift {report.drift:.3e}")
        return _passed(drift=report.drift)
    if name == "adjoint":
        report = adjoint_check(kk, samples, case_seed)
        if report.adjoint_degree != 0 or not (report.curve_homogeneity_ok and report.secant_homogeneity_ok):
            return _failed(f"adjoint bookkeeping {report.model_dump()}")
        return _passed(adjoint=report.model_dump())
    graph = one_skeleton(kk)
    if not graph.containments_ok():
        return _failed("vertex containment broken")
    if not graph.endpoints_ok():
        return _failed("edge endpoint outside its stratum closure")
    if not graph.is_connected():
        return _failed("skeleton is disconnected")
    return _passed(skeleton=graph.describe())


def _canonical_summary(k, samples, outcomes) -> Dict[str, Any]:
    details: Dict[str, Any] = {}
    for key, o in outcomes:
        if key == "residue-k1" and "residues" in o.detail:
            details["residue_pair"] = o.detail["residues"]
        elif key.startswith("drift-") and "drift" in o.detail:
            details.setdefault("pole_drift", {})[key] = o.detail["drift"]
        elif key.startswith("adjoint-") and "adjoint" in o.detail:
            details.setdefault("adjoint", {})[key] = o.detail["adjoint"]
        elif key.startswith("skeleton-") and "skeleton" in o.detail:
            details.setdefault("skeleton_edges", {})[key] = len(o.detail["skeleton"]["edges"])
    return details


SUITES: Dict[str, Suite] = {
    "algebraic-boundary": Suite("algebraic-boundary", _boundary_cases, _boundary_check, _boundary_summary, max_k=4),
    "residual-arrangement": Suite("residual-arrangement", _residual_cases, _residual_check, _residual_summary, max_k=3),
    "stratification": Suite("stratification", _residual_cases,
                            _stratification_check, _stratification_summary, max_k=4),
    "canonical-form": Suite("canonical-form", _canonical_cases, _canonical_check, _canonical_summary, uses_k=False),
}


# === Runner ===

def _suite(name: str) -> Suite:
    if name not in SUITES:
        raise ParameterError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    return SUITES[name]


def _case_seed(seed: int, suite: str, key: str, index: int) -> int:
    return derive_seed(seed, suite, key, index)


def _exemplar(suite: Suite, k, seed: int, index: int, key: str, case_seed: int,
              outcome: Optional[CaseOutcome], reason: str) -> FailureExemplar:
    return FailureExemplar(
        suite=suite.name, k=k, seed=seed, index=index, case_seed=case_seed, key=key,
        spec=outcome.spec.describe() if outcome and outcome.spec else None,
        plane=outcome.plane.to_strings() if outcome and outcome.plane else None,
        verdict=outcome.verdict if outcome else None,
        reason=reason,
    )


def run_suite(name: str, k: Optional[int], samples: int, seed: int,
              workers: int = Config.WORKERS, settings: Optional[SuiteSettings] = None) -> SuiteReport:
    """Run every case of one suite; failures are collected, never raised"""
    suite = _suite(name)
    settings = settings or SuiteSettings()
    if samples < 1:
        raise ParameterError("samples must be positive")
    if suite.uses_k:
        if k is None or k < 1:
            raise ParameterError(f"{name} needs k >= 1")
        if suite.max_k is not None and k > suite.max_k:
            raise ParameterError(f"{name} runs for k <= {suite.max_k}, got {k}")
    else:
        k = None

    started = time.perf_counter()
    keys = suite.cases(k, samples)
    seeds = [_case_seed(seed, name, key, index) for index, key in enumerate(keys)]
    logger.info(f"🧪 {name}: {len(keys)} cases (k={k}, seed={seed})")

    def one(index: int, case_seed: int) -> CaseOutcome:
        return suite.check(k, keys[index], index, case_seed, samples, settings)

    results = SampleRunner(workers).run(one, seeds)

    report = SuiteReport(suite=name, k=k, seed=seed, samples=samples, requested=len(keys),
                         settings=settings)
    outcomes: List[Tuple[str, CaseOutcome]] = []
    for result in results:
        key = keys[result.index]
        report.completed += 1
        if not result.ok:
            report.failed += 1
            report.failures.append(_exemplar(suite, k, seed, result.index, key, result.seed, None, result.error))
            continue
        outcome: CaseOutcome = result.value
        outcomes.append((key, outcome))
        if outcome.status == "pass":
            report.passed += 1
        elif outcome.status == "undetermined":
            report.undetermined += 1
            report.undetermined_cases.append(result.index)
        else:
            report.failed += 1
            report.failures.append(
                _exemplar(suite, k, seed, result.index, key, result.seed, outcome, outcome.reason))
    report.details = suite.summarize(k, samples, outcomes)
    report.wall_time = time.perf_counter() - started

    if report.ok:
        logger.info(f"✅ {name}: {report.passed}/{report.completed} passed")
    else:
        logger.warning(f"❌ {name}: {report.failed} failed, {report.undetermined} undetermined")
        logger.warning(f"🔍 diagnostics: {report.diagnostics()}")
    return report


def run_all(k: int, samples: int, seed: int, workers: int = Config.WORKERS,
            settings: Optional[SuiteSettings] = None) -> List[SuiteReport]:
    """Every suite that admits this k"""
    reports = []
    for name in SUITE_NAMES:
        suite = SUITES[name]
        if suite.uses_k and suite.max_k is not None and k > suite.max_k:
            logger.info(f"⏭️ skipping {name} for k={k}")
            continue
        reports.append(run_suite(name, k, samples, seed, workers, settings))
    return reports


def replay_case(name: str, k: Optional[int], seed: int, index: int, samples: int,
                settings: Optional[SuiteSettings] = None) -> CaseOutcome:
    """Re-run one case in isolation from its serialized coordinates"""
    suite = _suite(name)
    if not suite.uses_k:
        k = None
    keys = suite.cases(k, samples)
    if index < 0 or index >= len(keys):
        raise ParameterError(f"case index {index} outside 0..{len(keys) - 1}")
    key = keys[index]
    return suite.check(k, key, index, _case_seed(seed, name, key, index), samples, settings or SuiteSettings())
