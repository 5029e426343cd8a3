"""
Classification of (H, g(xi)) from the involutive quiver

Each *-fixed vertex contributes an orthogonal, symplectic or unitary factor,
each pair {i, i*} a general linear factor; *-fixed arrows contribute
exterior/symmetric squares or Hermitian forms and arrow pairs contribute Hom
spaces. predict_dimensions turns the report into dimensions over k^sigma and
over Q.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from semifix.algebra import SetupParams, validate_params
from semifix.errors import SetupValidationError
from semifix.quiver import (
    XI_OUTSIDE,
    ComponentShape,
    InvolutiveQuiver,
    build_quiver,
    classify_components,
    render_text,
)
from semifix.spectrum import CenterSpectrum, Vertex, split_center

logger = logging.getLogger(__name__)

# --- Kinds ---

GL_PAIR = "GLPair"
ORTH = "Orth"
SYMP = "Symp"
ORTH_OR_SYMP = "OrthOrSymp"
UNITARY = "Unitary"
GL = "GL"

HOM_PAIR = "HomPair"
WEDGE2 = "Wedge2"
SYM2 = "Sym2"
WEDGE_OR_SYM = "WedgeOrSym"
HERMITIAN = "Hermitian"
HOM = "Hom"

UNDETERMINED = {ORTH_OR_SYMP: (ORTH, SYMP), WEDGE_OR_SYM: (WEDGE2, SYM2)}

TYPE_CONFLICT = "fixed-vertex-type-conflict"
PAIRING_PERFECTION = "d_i = d_(i*) (perfect pairing M_i x M_(i*))"


@dataclass(frozen=True)
class FactorKind:
    """
    A factor of H.

    vertices is (i,) for a *-fixed vertex and (i, i*) for a GL pair.
    weil_degree is [L_i : k^sigma] (or [L_i : k] in linear mode).
    """
    kind: str
    vertices: Tuple[str, ...]
    base_field: str
    weil_degree: int
    provenance: str = ""
    flags: Tuple[str, ...] = ()

    @property
    def key(self) -> Tuple[str, str]:
        return ("vertex", self.vertices[0])


@dataclass(frozen=True)
class EdgeKind:
    """
    A summand of g(xi), attached to the arrow leaving `source`.

    For a pair {e, e*} the representative arrow is the one with the smaller
    source; `target` is xi_bar(source).
    """
    kind: str
    source: str
    target: str
    base_field: str
    weil_degree: int
    provenance: str = ""

    @property
    def key(self) -> Tuple[str, str]:
        return ("arrow", self.source)


@dataclass(frozen=True)
class ComponentReport:
    shape: ComponentShape
    factors: Tuple[FactorKind, ...]
    edges: Tuple[EdgeKind, ...]
    sign_provenance: Tuple[str, ...] = ()
    flags: Tuple[str, ...] = ()


@dataclass
class ClassificationReport:
    params: SetupParams
    spectrum: CenterSpectrum
    quiver: InvolutiveQuiver
    components: List[ComponentReport]
    flags: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def factors(self) -> List[FactorKind]:
        return [f for c in self.components for f in c.factors]

    @property
    def edges(self) -> List[EdgeKind]:
        return [e for c in self.components for e in c.edges]

    def quiver_text(self) -> str:
        return render_text(self.quiver, [c.shape for c in self.components])


@dataclass(frozen=True)
class DimRange:
    low: int
    high: int

    @property
    def exact(self) -> bool:
        return self.low == self.high

    def __add__(self, other: "DimRange") -> "DimRange":
        return DimRange(self.low + other.low, self.high + other.high)

    def scaled(self, factor: int) -> "DimRange":
        return DimRange(self.low * factor, self.high * factor)

    def contains(self, value: int) -> bool:
        return self.low <= value <= self.high


@dataclass(frozen=True)
class PredictedDimensions:
    """dim H and dim g(xi); `over` names the field of the first pair"""
    H: DimRange
    g_xi: DimRange
    over: str
    H_prime: Optional[DimRange] = None
    g_xi_prime: Optional[DimRange] = None


# --- Typing ---

def _field_name(p: SetupParams, vertex: Vertex) -> str:
    if p.regime.kind == "loop":
        if vertex.residue_degree == 1:
            return "C((tau))"
        return f"C((tau^(1/{vertex.residue_degree})))"
    return f"Q(zeta_{p.regime.M})"


def _weil_degree(p: SetupParams, vertex: Vertex) -> int:
    if not p.polarized:
        return vertex.residue_degree
    return vertex.residue_degree * p.regime.k_sigma_degree


def type_vertex(v: Vertex, q: InvolutiveQuiver, p: SetupParams) -> FactorKind:
    """Factor of H at a *-fixed vertex"""
    regime = p.regime
    weil = _weil_degree(p, v)
    base = _field_name(p, v)
    flags: Tuple[str, ...] = ()

    if not q.sigma_c_fixed[v.id]:
        provenance = "sigma_c nontrivial on L_i: unitary group over the sigma_c-fixed subfield"
        if not regime.sigma_trivial_on_k and p.mn % 2 == 1:
            flags = (TYPE_CONFLICT,)
            provenance += "; the sigma|_k != id, m/n odd case is also read as O/Sp in the loop analysis"
        return FactorKind(UNITARY, (v.id,), f"{base}^sigma_c", weil, provenance, flags)

    if regime.sigma_kind == "identity":
        kind = ORTH if p.epsilon == 1 else SYMP
        provenance = f"sigma = id_F forces epsilon_i = +1, so epsilon*epsilon_i = {p.epsilon:+d}"
        return FactorKind(kind, (v.id,), base, weil, provenance)

    provenance = "epsilon_i not determined by (k, sigma|_k, beta, gamma, Nm xi); resolved by the oracle"
    return FactorKind(ORTH_OR_SYMP, (v.id,), base, weil, provenance)


def type_fixed_arrow(source: str, q: InvolutiveQuiver, p: SetupParams) -> EdgeKind:
    """g(xi)-summand at the *-fixed arrow leaving `source`"""
    regime = p.regime
    vertex = q.spectrum.vertex(source)
    weil = _weil_degree(p, vertex)
    base = _field_name(p, vertex)
    target = q.xi_bar[source]

    if not q.sigma_cxi_fixed[source]:
        provenance = "sigma_(c xi^-1) nontrivial on L_i: Hermitian forms"
        return EdgeKind(HERMITIAN, source, target, f"{base}^sigma_cxi", weil, provenance)

    if regime.sigma_kind == "identity":
        kind = WEDGE2 if p.epsilon == 1 else SYM2
        provenance = f"sigma = id_F forces epsilon_e = +1, so -epsilon*epsilon_e = {-p.epsilon:+d}"
        return EdgeKind(kind, source, target, base, weil, provenance)

    provenance = "epsilon_e not determined by coarse invariants; resolved by the oracle"
    return EdgeKind(WEDGE_OR_SYM, source, target, base, weil, provenance)


# --- Assembly ---

def _component_report(shape: ComponentShape, q: InvolutiveQuiver, p: SetupParams,
                      with_edges: bool) -> ComponentReport:
    spectrum = q.spectrum
    position = {v: i for i, v in enumerate(spectrum.ids)}
    members = sorted(shape.vertices, key=position.get)
    factors: List[FactorKind] = []
    edges: List[EdgeKind] = []

    if not q.polarized:
        for vertex_id in members:
            vertex = spectrum.vertex(vertex_id)
            factors.append(FactorKind(GL, (vertex_id,), _field_name(p, vertex), _weil_degree(p, vertex),
                                      "linear mode: GL of each multiplicity space"))
        if with_edges:
            for vertex_id in members:
                vertex = spectrum.vertex(vertex_id)
                edges.append(EdgeKind(HOM, vertex_id, q.xi_bar[vertex_id], _field_name(p, vertex),
                                      _weil_degree(p, vertex), "linear mode: Hom along each arrow"))
        return ComponentReport(shape, tuple(factors), tuple(edges))

    star = q.vertex_star
    seen = set()
    for vertex_id in members:
        if vertex_id in seen:
            continue
        seen.update({vertex_id, star[vertex_id]})
        vertex = spectrum.vertex(vertex_id)
        if star[vertex_id] == vertex_id:
            factors.append(type_vertex(vertex, q, p))
        else:
            factors.append(FactorKind(GL_PAIR, (vertex_id, star[vertex_id]), _field_name(p, vertex),
                                      _weil_degree(p, vertex), "i != i*: GL(M_i), M_(i*) dual to M_i"))

    if with_edges:
        seen = set()
        for source in members:
            if source in seen:
                continue
            mirror = q.arrow_star[source]
            seen.update({source, mirror})
            if mirror == source:
                edges.append(type_fixed_arrow(source, q, p))
            else:
                vertex = spectrum.vertex(source)
                edges.append(EdgeKind(HOM_PAIR, source, q.xi_bar[source], _field_name(p, vertex),
                                      _weil_degree(p, vertex), "e != e*: Hom(M_i, M_xi_bar(i))"))

    provenance = tuple(f"{shape.label_of(f.vertices[0])}: {f.kind} ({f.provenance})" for f in factors
                       if f.kind != GL_PAIR)
    provenance += tuple(f"{shape.label_of(e.source)}->{shape.label_of(e.target)}: {e.kind} ({e.provenance})"
                        for e in edges if e.kind != HOM_PAIR)
    flags = tuple(shape.flags) + tuple(flag for f in factors for flag in f.flags)
    return ComponentReport(shape, tuple(factors), tuple(edges), provenance, flags)


def assemble_report(q: InvolutiveQuiver, shapes: List[ComponentShape], p: SetupParams) -> ClassificationReport:
    """Collect H-factors and g(xi)-summands per component"""
    with_edges = not q.xi_outside
    components = [_component_report(shape, q, p, with_edges) for shape in shapes]
    flags = sorted({flag for c in components for flag in c.flags})
    if q.xi_outside:
        flags.append(XI_OUTSIDE)
    report = ClassificationReport(
        params=p,
        spectrum=q.spectrum,
        quiver=q,
        components=components,
        flags=flags,
        warnings=list(p.warnings),
    )
    logger.info(
        f"Classified {len(components)} components: "
        f"{', '.join(c.shape.name for c in components)}"
    )
    return report


def classify(p: SetupParams) -> ClassificationReport:
    """Full pipeline: validate, split the center, build and classify the quiver"""
    if not p.validated:
        p = validate_params(p)
    spectrum = split_center(p)
    quiver = build_quiver(spectrum, p)
    shapes = classify_components(quiver)
    return assemble_report(quiver, shapes, p)


# --- Dimensions ---

def _factor_dim(kind: str, weil: int, d: int) -> DimRange:
    if kind in (GL_PAIR, GL):
        value = weil * d * d
    elif kind == ORTH:
        value = weil * d * (d - 1) // 2
    elif kind == SYMP:
        value = weil * d * (d + 1) // 2
    elif kind == UNITARY:
        value = weil * d * d // 2
    elif kind == ORTH_OR_SYMP:
        return DimRange(weil * d * (d - 1) // 2, weil * d * (d + 1) // 2)
    else:
        raise ValueError(f"Unknown factor kind '{kind}'")
    return DimRange(value, value)


def _edge_dim(kind: str, weil: int, d_source: int, d_target: int) -> DimRange:
    if kind in (HOM_PAIR, HOM):
        value = weil * d_source * d_target
    elif kind == WEDGE2:
        value = weil * d_source * (d_source - 1) // 2
    elif kind == SYM2:
        value = weil * d_source * (d_source + 1) // 2
    elif kind == HERMITIAN:
        value = weil * d_source * d_source // 2
    elif kind == WEDGE_OR_SYM:
        return DimRange(weil * d_source * (d_source - 1) // 2, weil * d_source * (d_source + 1) // 2)
    else:
        raise ValueError(f"Unknown edge kind '{kind}'")
    return DimRange(value, value)


def check_multiplicities(r: ClassificationReport, mult: Mapping[str, int]) -> Dict[str, int]:
    """
    Complete a multiplicity map (missing vertices get 0) and check it.

    Raises:
        SetupValidationError: On unknown vertices, negative values or d_i != d_(i*)
    """
    ids = r.spectrum.ids
    unknown = [v for v in mult if v not in ids]
    if unknown:
        raise SetupValidationError.single("multiplicity selectors name vertices", f"unknown vertices {unknown}")
    full = {v: int(mult.get(v, 0)) for v in ids}
    negative = [v for v, d in full.items() if d < 0]
    if negative:
        raise SetupValidationError.single("d_i >= 0", f"negative multiplicities at {negative}")
    star = r.quiver.vertex_star
    if star is not None:
        mismatched = [(v, star[v]) for v in ids if full[v] != full[star[v]]]
        if mismatched:
            raise SetupValidationError.single(
                PAIRING_PERFECTION,
                ", ".join(f"d({a}) = {full[a]} but d({b}) = {full[b]}" for a, b in mismatched),
            )
    return full


def predict_dimensions(r: ClassificationReport, mult: Mapping[str, int],
                       resolution: Optional[Mapping[Tuple[str, str], str]] = None) -> PredictedDimensions:
    """
    dim H and dim g(xi) for the multiplicities `mult`.

    Args:
        r: Classification report
        mult: vertex id -> d_i (missing vertices count as 0)
        resolution: Optional item key -> resolved kind for OrthOrSymp / WedgeOrSym

    Returns:
        Dimensions over k^sigma (k in linear mode) and over Q when defined
    """
    d = check_multiplicities(r, mult)
    resolution = resolution or {}
    h = DimRange(0, 0)
    g = DimRange(0, 0)
    for factor in r.factors:
        kind = resolution.get(factor.key, factor.kind)
        h = h + _factor_dim(kind, factor.weil_degree, d[factor.vertices[0]])
    for edge in r.edges:
        kind = resolution.get(edge.key, edge.kind)
        g = g + _edge_dim(kind, edge.weil_degree, d[edge.source], d[edge.target])

    regime = r.params.regime
    if r.params.polarized:
        over = "k_sigma"
        prime = regime.prime_degree
    else:
        over = "k"
        prime = None if regime.kind == "loop" else regime.prime_degree * regime.k_sigma_degree
    return PredictedDimensions(
        H=h,
        g_xi=g,
        over=over,
        H_prime=h.scaled(prime) if prime is not None else None,
        g_xi_prime=g.scaled(prime) if prime is not None else None,
    )
