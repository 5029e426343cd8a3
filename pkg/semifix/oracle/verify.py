"""
Verification harness

Builds seeded random realizations of a setup and checks every classifier
prediction against the brute-force oracle: multiplicities, dim Lie H,
dim g(xi), the twisted computation of g(xi), the vertex pairings and the
base-change identity. OrthOrSymp / WedgeOrSym predictions are resolved
through the signs recovered from the simple models.
"""

import logging
from dataclasses import replace
from typing import Dict, List, Mapping, Optional, Tuple, TypedDict

from semifix.algebra import SetupParams
from semifix.classifier import (
    ORTH,
    ORTH_OR_SYMP,
    SYM2,
    SYMP,
    WEDGE2,
    WEDGE_OR_SYM,
    ClassificationReport,
    DimRange,
    check_multiplicities,
    classify,
    predict_dimensions,
)
from semifix.oracle.checks import (
    check_base_change,
    eigenspace_dim,
    eigenspace_dim_via_twist,
    extract_vertex_pairing,
    fixed_lie_dim,
    isotypic_multiplicities,
    arrow_sign,
    vertex_sign,
)
from semifix.oracle.linsolve import SolverSettings
from semifix.oracle.realize import PolarizedSetup, build_setup, require_oracle_regime

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"


class CheckResult(TypedDict):
    name: str
    status: str
    expected: str
    actual: str
    seed: Optional[int]
    detail: str


class TrialReport(TypedDict):
    seed: int
    N: int
    checks: List[CheckResult]
    dims: Dict[str, int]


class VerificationReport(TypedDict):
    passed: bool
    trials: List[TrialReport]
    resolution: Dict[str, str]
    failures: List[CheckResult]
    summary: Dict[str, int]


def _check(name: str, ok: bool, expected, actual, seed: Optional[int], detail: str = "") -> CheckResult:
    return CheckResult(
        name=name,
        status=PASS if ok else FAIL,
        expected=str(expected),
        actual=str(actual),
        seed=seed,
        detail=detail,
    )


def _format_range(r: DimRange) -> str:
    return str(r.low) if r.exact else f"[{r.low}, {r.high}]"


def _compare_dim(name: str, predicted: Optional[DimRange], observed: int, seed: int) -> CheckResult:
    if predicted is None:
        return _check(name, True, "n/a", observed, seed, "no prediction over this field")
    if predicted.exact:
        return _check(name, predicted.low == observed, _format_range(predicted), observed, seed)
    return _check(name, predicted.contains(observed), _format_range(predicted), observed, seed,
                  "prediction is an unresolved interval")


def resolution_label(key: Tuple[str, str], report: ClassificationReport) -> str:
    kind, vertex_id = key
    if kind == "vertex":
        return f"vertex {vertex_id}"
    return f"arrow {vertex_id}->{report.quiver.xi_bar[vertex_id]}"


def resolution_keys(report: ClassificationReport, labels: Mapping[str, str]) -> Dict[Tuple[str, str], str]:
    """Map a verification's labelled resolution back to factor / edge keys"""
    keys = [f.key for f in report.factors] + [e.key for e in report.edges]
    return {key: labels[resolution_label(key, report)] for key in keys
            if resolution_label(key, report) in labels}


def resolve_kinds(report: ClassificationReport, setup: PolarizedSetup) -> Dict[Tuple[str, str], str]:
    """
    Resolve undetermined factor and edge kinds from the model signs.

    OrthOrSymp -> Orth iff epsilon * epsilon_i = 1; WedgeOrSym -> Wedge2 iff
    epsilon * epsilon_e = 1.
    """
    if not setup.polarized:
        return {}
    p = setup.params
    resolved = {}
    for factor in report.factors:
        if factor.kind == ORTH_OR_SYMP:
            sign = p.epsilon * vertex_sign(setup, factor.vertices[0])
            resolved[factor.key] = ORTH if sign == 1 else SYMP
    for edge in report.edges:
        if edge.kind == WEDGE_OR_SYM:
            sign = p.epsilon * arrow_sign(setup, p.xi, edge.source)
            resolved[edge.key] = WEDGE2 if sign == 1 else SYM2
    return resolved


def _sign_consistency(report: ClassificationReport, setup: PolarizedSetup, seed: int) -> List[CheckResult]:
    """
    Definite Orth/Symp predictions agree with the sign recovered from the
    extracted pairing, and Wedge2/Sym2 predictions with the model arrow signs.
    """
    p = setup.params
    checks = []
    for factor in report.factors:
        vid = factor.vertices[0]
        if factor.kind in (ORTH, SYMP) and setup.multiplicities.get(vid, 0) > 0:
            epsilon_i = extract_vertex_pairing(setup, vid)["epsilon_i"]
            derived = ORTH if p.epsilon * epsilon_i == 1 else SYMP
            checks.append(_check(f"vertex-sign:{vid}", derived == factor.kind, factor.kind, derived, seed,
                                 f"epsilon_i = {epsilon_i:+d}"))
    for edge in report.edges:
        if edge.kind in (WEDGE2, SYM2):
            derived = WEDGE2 if p.epsilon * arrow_sign(setup, p.xi, edge.source) == 1 else SYM2
            checks.append(_check(f"arrow-sign:{edge.source}", derived == edge.kind, edge.kind, derived, seed))
    return checks


def _pairing_checks(report: ClassificationReport, setup: PolarizedSetup, seed: int) -> List[CheckResult]:
    checks = []
    star = report.quiver.vertex_star
    seen = set()
    for vertex in report.spectrum.vertices:
        vid = vertex.id
        if vid in seen or setup.multiplicities.get(vid, 0) == 0:
            continue
        seen.update({vid, star[vid]})
        pairing = extract_vertex_pairing(setup, vid)
        detail = f"{pairing['symmetry_type']}, epsilon_i = {pairing['epsilon_i']:+d}"
        checks.append(_check(f"pairing-perfect:{vid}", pairing["perfect"], True, pairing["perfect"], seed, detail))
        checks.append(_check(f"pairing-sesquilinear:{vid}", pairing["sesquilinear"], True,
                             pairing["sesquilinear"], seed, detail))
        checks.append(_check(f"pairing-symmetry:{vid}", pairing["symmetry_holds"], True,
                             pairing["symmetry_holds"], seed, detail))
    return checks


def run_trial(report: ClassificationReport, setup: PolarizedSetup, settings: SolverSettings) -> TrialReport:
    """All checks on one realization"""
    p = setup.params
    seed = setup.seed
    checks: List[CheckResult] = []
    mult = setup.multiplicities

    observed = isotypic_multiplicities(setup)
    checks.append(_check("isotypic-multiplicities", observed == mult, mult, observed, seed))

    resolution = resolve_kinds(report, setup)
    predicted = predict_dimensions(report, mult, resolution)

    lie = fixed_lie_dim(setup, settings)
    eigen = eigenspace_dim(setup, p.xi, settings)
    checks.append(_compare_dim("dim Lie H", predicted.H, lie["field_dim"], seed))
    checks.append(_compare_dim("dim g(xi)", predicted.g_xi, eigen["field_dim"], seed))
    checks.append(_compare_dim("dim_Q Lie H", predicted.H_prime, lie["nullity"], seed))
    checks.append(_compare_dim("dim_Q g(xi)", predicted.g_xi_prime, eigen["nullity"], seed))

    twisted = eigenspace_dim_via_twist(setup, p.xi, settings)
    checks.append(_check("twist-coherence", twisted["nullity"] == eigen["nullity"],
                         eigen["nullity"], twisted["nullity"], seed))

    if setup.polarized:
        checks.extend(_sign_consistency(report, setup, seed))
        checks.extend(_pairing_checks(report, setup, seed))

    if p.regime.n > 1:
        holds = check_base_change(setup, p.xi, settings)
        checks.append(_check("base-change", holds, True, holds, seed))

    return TrialReport(
        seed=seed,
        N=setup.N,
        checks=checks,
        dims={"H": lie["field_dim"], "g_xi": eigen["field_dim"],
              "H_prime": lie["nullity"], "g_xi_prime": eigen["nullity"]},
    )


def verify(p: SetupParams, mult: Mapping[str, int], trials: int = 5, seed: int = 0,
           settings: Optional[SolverSettings] = None) -> VerificationReport:
    """
    Cross-check the classification of p on `trials` random realizations.

    Args:
        p: Setup parameters (numberfield regime)
        mult: vertex id -> d_i
        trials: Number of seeded realizations
        seed: Seed of the first trial; trial t uses seed + t
        settings: Solver settings (exact elimination, prime size)

    Returns:
        VerificationReport; passed is True only if every check passed

    Raises:
        ValueError: If trials is not positive
        OracleRegimeError: Outside the numberfield regime
        ParityConflict: If the multiplicities admit no form
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    p = require_oracle_regime(p)
    settings = settings or SolverSettings()
    report = classify(p)
    mult = check_multiplicities(report, mult)

    trial_reports: List[TrialReport] = []
    resolution: Dict[str, str] = {}
    for t in range(trials):
        trial_seed = seed + t
        setup = build_setup(p, mult, seed=trial_seed, report=report)
        trial = run_trial(report, setup, replace(settings, seed=trial_seed))
        trial_reports.append(trial)
        for key, kind in resolve_kinds(report, setup).items():
            resolution[resolution_label(key, report)] = kind
        failed = [c["name"] for c in trial["checks"] if c["status"] == FAIL]
        if failed:
            logger.warning(f"Trial {t} (seed {trial_seed}): failed {', '.join(failed)}")
        else:
            logger.info(f"Trial {t} (seed {trial_seed}): {len(trial['checks'])} checks passed")

    failures = [c for trial in trial_reports for c in trial["checks"] if c["status"] == FAIL]
    if trial_reports:
        reference = trial_reports[0]["dims"]
        for trial in trial_reports[1:]:
            check = _check("choice-independence", trial["dims"] == reference, reference, trial["dims"],
                           trial["seed"])
            trial["checks"].append(check)
            if check["status"] == FAIL:
                failures.append(check)

    total = sum(len(trial["checks"]) for trial in trial_reports)
    return VerificationReport(
        passed=not failures,
        trials=trial_reports,
        resolution=resolution,
        failures=failures,
        summary={"trials": len(trial_reports), "checks": total, "failed": len(failures)},
    )
