"""
Adapter layer between file schemas and the core types

Turns a validated ConfigFile into SetupParams and multiplicities, and a
ClassificationReport (plus an optional verification run) into a ReportFile.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from semifix.algebra import GroundRegime, SetupParams, validate_params
from semifix.api.schemas import (
    ArrowEntry,
    ComponentEntry,
    ConfigFile,
    DimRangeEntry,
    DimsEntry,
    EdgeEntry,
    FactorEntry,
    PredictedDimsEntry,
    ReportFile,
    ScalarSpec,
    VertexEntry,
)
from semifix.classifier import UNDETERMINED, ClassificationReport, DimRange, PredictedDimensions, predict_dimensions
from semifix.errors import ConfigError, SetupValidationError
from semifix.loop_table import LoopCaseRow, match_loop_case, report_agrees
from semifix.scalars import (
    CyclotomicNumber,
    LoopMonomial,
    format_rational,
    root_of_unity,
    root_of_unity_exponent,
)
from semifix.spectrum import CenterSpectrum

logger = logging.getLogger(__name__)

SELECTOR_MATCH = "multiplicity selectors name vertices"


# --- Config -> core ---

def scalar_k(spec: ScalarSpec, regime: GroundRegime, field: str):
    """A k-scalar from its spec"""
    if regime.kind == "loop":
        if spec.zeta_exp is None:
            raise ConfigError("loop scalars are given as {zeta_exp, val}", field=field)
        return LoopMonomial.of(Fraction(spec.zeta_exp), Fraction(spec.val or 0))
    if spec.val is not None:
        raise ConfigError("val (a tau-valuation) is only valid in the loop regime", field=field)
    if spec.f_coords is not None:
        raise ConfigError("expected a k-scalar, got f_coords", field=field)
    if spec.cyclo_coeffs is not None:
        return CyclotomicNumber.from_rationals(regime.M, [Fraction(c) for c in spec.cyclo_coeffs])
    return root_of_unity(regime.M, Fraction(spec.zeta_exp))


def scalar_f(spec: ScalarSpec, regime: GroundRegime, field: str):
    """An F-scalar from its spec; a k-spec denotes lambda * 1"""
    if regime.kind == "loop":
        return scalar_k(spec, regime, field)
    algebra = regime.field
    if spec.f_coords is None:
        return algebra.from_k(scalar_k(spec, regime, field))
    if algebra.rank != 2:
        raise ConfigError(f"f_coords needs a rank-2 presentation, got '{regime.presentation}'", field=field)
    return tuple(scalar_k(entry, regime, f"{field}.f_coords.{i}") for i, entry in enumerate(spec.f_coords))


def params_from_config(config: ConfigFile) -> SetupParams:
    """
    Build and validate the setup described by a config.

    Raises:
        ConfigError: If a scalar does not fit the regime
        SetupValidationError: If the setup violates a constraint
    """
    regime = GroundRegime(
        kind=config.regime,
        M=config.M,
        n=config.n,
        sigma_kind=config.sigma,
        presentation=config.presentation,
        discriminant=config.d,
    )
    violations = regime.structure_violations()
    if violations:
        raise SetupValidationError(violations)

    p = SetupParams(
        regime=regime,
        m=config.m,
        beta=scalar_k(config.beta, regime, "beta"),
        xi=scalar_f(config.xi, regime, "xi"),
        epsilon=config.epsilon,
        mode=config.mode,
        c=scalar_f(config.c, regime, "c") if config.c is not None else None,
        gamma=scalar_k(config.gamma, regime, "gamma") if config.gamma is not None else None,
    )
    return validate_params(p)


def multiplicities_from_config(config: ConfigFile, spectrum: CenterSpectrum) -> Dict[str, int]:
    """
    Resolve selectors to vertex ids; unmentioned vertices get d = 0.

    Raises:
        SetupValidationError: On an unmatched selector or two selectors for one vertex
    """
    mult = {vertex_id: 0 for vertex_id in spectrum.ids}
    named: Dict[str, str] = {}
    for entry in config.multiplicities:
        vertex = spectrum.select(entry.vertex)
        if vertex is None:
            raise SetupValidationError.single(
                SELECTOR_MATCH, f"no vertex matches '{entry.vertex}' (vertices: {', '.join(spectrum.ids)})")
        if vertex.id in named:
            raise SetupValidationError.single(
                SELECTOR_MATCH, f"'{entry.vertex}' and '{named[vertex.id]}' both select {vertex.id}")
        named[vertex.id] = entry.vertex
        mult[vertex.id] = entry.d
    return mult


# --- Core -> config ---

def scalar_spec(value, regime: GroundRegime) -> Dict[str, Any]:
    """Inverse of scalar_k / scalar_f"""
    if regime.kind == "loop":
        return {"zeta_exp": format_rational(value.coeff.value), "val": format_rational(value.val)}
    if isinstance(value, tuple):
        if len(value) == 1:
            return scalar_spec(value[0], regime)
        return {"f_coords": [scalar_spec(v, regime) for v in value]}
    exponent = root_of_unity_exponent(value)
    if exponent is not None:
        return {"zeta_exp": format_rational(exponent)}
    return {"cyclo_coeffs": value.to_strings()}


def config_from_params(p: SetupParams, mult: Optional[Mapping[str, int]] = None) -> Dict[str, Any]:
    """A config dictionary that parses back to p"""
    regime = p.regime
    config: Dict[str, Any] = {
        "format": "1",
        "regime": regime.kind,
        "M": regime.M,
        "n": regime.n,
        "m": p.m,
        "mode": p.mode,
        "epsilon": p.epsilon,
        "sigma": regime.sigma_kind,
        "beta": scalar_spec(p.beta, regime),
        "xi": scalar_spec(p.xi, regime),
    }
    if regime.kind == "numberfield":
        config["presentation"] = regime.presentation
        if regime.discriminant is not None:
            config["d"] = regime.discriminant
        if p.polarized and p.c is not None:
            config["c"] = scalar_spec(p.c, regime)
    elif p.polarized and p.gamma is not None:
        config["gamma"] = scalar_spec(p.gamma, regime)
    if mult:
        config["multiplicities"] = [{"vertex": v, "d": d} for v, d in mult.items() if d]
    return config


# --- Core -> report ---

def _range(r: DimRange) -> DimRangeEntry:
    return DimRangeEntry(low=r.low, high=r.high)


def _dims(p: PredictedDimensions) -> PredictedDimsEntry:
    prime = None
    if p.H_prime is not None and p.g_xi_prime is not None:
        prime = DimsEntry(H=_range(p.H_prime), g_xi=_range(p.g_xi_prime))
    return PredictedDimsEntry(over=p.over, dims=DimsEntry(H=_range(p.H), g_xi=_range(p.g_xi)), prime_field=prime)


def params_echo(p: SetupParams) -> Dict[str, Any]:
    """Human-readable echo of the validated parameters"""
    regime = p.regime
    fmt = regime.field.format
    echo: Dict[str, Any] = {
        "regime": regime.kind,
        "M": regime.M,
        "n": regime.n,
        "m": p.m,
        "mode": p.mode,
        "sigma": regime.sigma_kind,
        "beta": str(p.beta),
        "xi": fmt(p.xi),
        "xi_in_Xi": p.xi_in_Xi,
    }
    if regime.kind == "numberfield":
        echo["presentation"] = regime.presentation
        echo["d"] = regime.discriminant
    if p.polarized:
        echo["epsilon"] = p.epsilon
        echo["gamma"] = str(p.gamma)
        echo["c"] = fmt(p.c) if p.c is not None else None
    return echo


def _loop_case_entry(report: ClassificationReport) -> Optional[Dict[str, Any]]:
    row = match_loop_case(report.params)
    if row is None:
        return None
    return {"key": row.key, "shape": row.shape, "agrees": report_agrees(row, report)}


def report_to_file(report: ClassificationReport, mult: Optional[Mapping[str, int]] = None,
                   resolution: Optional[Mapping[Tuple[str, str], str]] = None,
                   verification: Optional[Dict[str, Any]] = None) -> ReportFile:
    """
    Serialize a classification.

    Args:
        report: Classifier output
        mult: Multiplicities; predicted dimensions are included when given
        resolution: Resolved OrthOrSymp / WedgeOrSym kinds from a verification
        verification: Verification block to embed
    """
    q = report.quiver
    mult = dict(mult) if mult is not None else None
    vertices = [
        VertexEntry(
            id=v.id,
            b_value=v.label,
            residue_degree=v.residue_degree,
            division_degree=v.division_degree,
            multiplicity=mult.get(v.id, 0) if mult else 0,
            star=q.vertex_star[v.id] if q.polarized else None,
            sigma_c_fixed=q.sigma_c_fixed.get(v.id) if q.polarized else None,
        )
        for v in report.spectrum.vertices
    ]
    arrows = [
        ArrowEntry(
            source=a.source,
            to=a.target,
            star_fixed=q.arrow_fixed(a.source) if q.polarized else None,
            sigma_cxi_fixed=q.sigma_cxi_fixed.get(a.source) if q.polarized else None,
        )
        for a in q.arrows
    ]
    components: List[ComponentEntry] = []
    for c in report.components:
        factors = [
            FactorEntry(kind=f.kind, vertices=list(f.vertices), base_field=f.base_field,
                        weil_degree=f.weil_degree, provenance=f.provenance, flags=list(f.flags),
                        options=list(UNDETERMINED[f.kind]) if f.kind in UNDETERMINED else None)
            for f in c.factors
        ]
        edges = [
            EdgeEntry(kind=e.kind, source=e.source, target=e.target, base_field=e.base_field,
                      weil_degree=e.weil_degree, provenance=e.provenance,
                      options=list(UNDETERMINED[e.kind]) if e.kind in UNDETERMINED else None)
            for e in c.edges
        ]
        components.append(ComponentEntry(
            shape=c.shape.name,
            kind=c.shape.kind,
            ell=c.shape.ell,
            labels=[list(pair) for pair in c.shape.labels],
            factors=factors,
            edge_spaces=edges,
            sign_provenance=list(c.sign_provenance),
            flags=list(c.flags),
        ))

    predicted = _dims(predict_dimensions(report, mult, resolution)) if mult is not None else None
    loop_case = _loop_case_entry(report) if report.params.regime.kind == "loop" else None
    return ReportFile(
        params=params_echo(report.params),
        vertices=vertices,
        arrows=arrows,
        components=components,
        predicted_dims=predicted,
        quiver_text=report.quiver_text(),
        flags=list(report.flags),
        warnings=list(report.warnings),
        verification=verification,
        loop_case=loop_case,
    )


def table_row_to_dict(row: LoopCaseRow, witness: SetupParams, report: ClassificationReport,
                      agrees: bool) -> Dict[str, Any]:
    p = witness
    factors, edges = row.expected_kinds(p.regime.sigma_kind, p.epsilon)
    return {
        "key": row.key,
        "pattern": row.pattern(),
        "shape": row.shape,
        "factor_kinds": factors,
        "edge_kinds": edges,
        "source": row.source,
        "witness": config_from_params(p),
        "classified": [c.shape.name for c in report.components],
        "agrees": agrees,
    }
